"""Datasets: MovieLens 1M and the synthetic corpus."""

"""Fuzzy rule network."""

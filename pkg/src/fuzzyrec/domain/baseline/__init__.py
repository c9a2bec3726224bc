"""Bias-only baseline."""

from .bias_model import BiasModel, BiasScorer, fit_bias, predict_bias

__all__ = ["BiasModel", "BiasScorer", "fit_bias", "predict_bias"]

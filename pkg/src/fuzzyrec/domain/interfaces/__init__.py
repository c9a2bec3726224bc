"""Domain interfaces."""

from .scorer import IScorer

__all__ = ["IScorer"]

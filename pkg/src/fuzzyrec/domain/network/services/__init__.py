"""Rule network services."""

from .network_scorer import NetworkScorer

__all__ = ["NetworkScorer"]

"""Evaluation models."""

from .report import (
    METRICS,
    CandidateSet,
    MetricKey,
    MetricsReport,
    MetricValue,
    ScoredItem,
    UserRanking,
)

__all__ = [
    "METRICS",
    "MetricKey",
    "CandidateSet",
    "MetricsReport",
    "MetricValue",
    "ScoredItem",
    "UserRanking",
]

"""Evaluation services."""

from .evaluation_service import (
    EvaluationService,
    aggregate,
    evaluate,
    rank_candidates,
    repeat_evaluate,
)
from .ranking_metrics import (
    map_at_k,
    ndcg_at_k,
    precision_at_k,
    rank_user,
    recall_at_k,
    user_metrics,
)

__all__ = [
    "EvaluationService",
    "evaluate",
    "repeat_evaluate",
    "rank_candidates",
    "aggregate",
    "rank_user",
    "precision_at_k",
    "recall_at_k",
    "ndcg_at_k",
    "map_at_k",
    "user_metrics",
]

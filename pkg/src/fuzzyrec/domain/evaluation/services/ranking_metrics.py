"""
Top-k ranking metrics over binary relevance.

Precision divides by k even when the user has fewer than k candidates.
Recall, NDCG and MAP are undefined for a user without relevant items and
raise EmptyInputError; aggregation leaves such users out.
"""

from typing import Dict, Sequence

import numpy as np

from fuzzyrec.domain.evaluation.models.report import MetricKey, ScoredItem, UserRanking
from fuzzyrec.domain.exceptions.exception import (
    EmptyInputError,
    ShapeMismatchError,
    ValidationException,
)


def rank_user(
    user_id: int,
    item_ids: Sequence[int],
    scores: Sequence[float],
    relevant: Sequence[int],
) -> UserRanking:
    """
    Order one user's candidates by score descending, item id ascending.

    Raises:
        EmptyInputError: If there are no candidates
        ShapeMismatchError: If the columns differ in length
    """
    items = np.asarray(item_ids, dtype=np.int64)
    values = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(relevant, dtype=np.int64)
    if not len(items) == len(values) == len(labels):
        raise ShapeMismatchError("item ids, scores and relevance differ in length")
    if len(items) == 0:
        raise EmptyInputError(f"user {user_id} has no candidates")
    order = np.lexsort((items, -values))
    return UserRanking(
        user_id=int(user_id),
        items=tuple(
            ScoredItem(int(items[i]), float(values[i]), int(labels[i])) for i in order
        ),
    )


def _check_k(k: int) -> None:
    if k <= 0:
        raise ValidationException(f"k must be positive, got {k}")


def _require_relevant(ranking: UserRanking) -> int:
    total = ranking.n_relevant
    if total == 0:
        raise EmptyInputError(f"user {ranking.user_id} has no relevant items")
    return total


def precision_at_k(ranking: UserRanking, k: int) -> float:
    _check_k(k)
    return float(ranking.relevance[:k].sum() / k)


def recall_at_k(ranking: UserRanking, k: int) -> float:
    _check_k(k)
    total = _require_relevant(ranking)
    return float(ranking.relevance[:k].sum() / total)


def _dcg(relevance: np.ndarray) -> float:
    discounts = 1.0 / np.log2(np.arange(2, relevance.size + 2))
    return float(np.dot(relevance, discounts))


def ndcg_at_k(ranking: UserRanking, k: int) -> float:
    """DCG of the top k over the DCG of the ideal top k."""
    _check_k(k)
    total = _require_relevant(ranking)
    ideal = _dcg(np.ones(min(total, k)))
    return _dcg(ranking.relevance[:k]) / ideal


def map_at_k(ranking: UserRanking, k: int) -> float:
    """Average precision at k: sum of precision@p at hit positions p, over min(relevant, k)."""
    _check_k(k)
    total = _require_relevant(ranking)
    top = ranking.relevance[:k]
    hits = np.cumsum(top)
    positions = np.arange(1, top.size + 1)
    return float(np.sum(top * hits / positions) / min(total, k))


def user_metrics(ranking: UserRanking, ks: Sequence[int]) -> Dict[MetricKey, float]:
    """
    All metrics of one user.

    Recall, NDCG and MAP are omitted for a user without relevant items.
    """
    values: Dict[MetricKey, float] = {}
    has_relevant = ranking.n_relevant > 0
    for k in ks:
        values[("precision", k)] = precision_at_k(ranking, k)
        if has_relevant:
            values[("recall", k)] = recall_at_k(ranking, k)
            values[("ndcg", k)] = ndcg_at_k(ranking, k)
            values[("map", k)] = map_at_k(ranking, k)
    return values

"""
Interaction statistics used by the stat-threshold atoms.

Statistics are computed from the training partition only. Users and items
that are absent from it get a fallback value: the global mean rating for
the mean-rating statistics (a user or item bias of zero) and the mean
per-item count for the popularity statistic.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from fuzzyrec.domain.exceptions.exception import EmptyInputError, ValidationException

ITEM_MEAN_RATING = "item_mean_rating"
USER_MEAN_RATING = "user_mean_rating"
ITEM_RATING_COUNT = "item_rating_count"

STAT_SOURCES = (ITEM_MEAN_RATING, USER_MEAN_RATING, ITEM_RATING_COUNT)
USER_STATS = (USER_MEAN_RATING,)

DEFAULT_PERCENTILES = (10, 25, 50, 75, 90)


@dataclass(frozen=True)
class InteractionStats:
    """Per-entity statistics of the training interactions.

    Attributes:
        item_mean: Mean rating per item id
        item_count: Number of ratings per item id
        user_mean: Mean rating per user id
        global_mean: Mean of all training ratings
        global_item_count: Mean number of ratings per rated item
        user_favorite_genre: Genre with the highest mean rating per user id
    """

    item_mean: pd.Series
    item_count: pd.Series
    user_mean: pd.Series
    global_mean: float
    global_item_count: float
    user_favorite_genre: pd.Series

    def values(self, source: str) -> pd.Series:
        """Per-entity values of one statistic."""
        if source == ITEM_MEAN_RATING:
            return self.item_mean
        if source == USER_MEAN_RATING:
            return self.user_mean
        if source == ITEM_RATING_COUNT:
            return self.item_count.astype(np.float64)
        raise ValidationException(f"Unknown statistic: {source}")

    def fallback(self, source: str) -> float:
        """Value imputed for users or items without training ratings."""
        if source == ITEM_RATING_COUNT:
            return self.global_item_count
        if source in (ITEM_MEAN_RATING, USER_MEAN_RATING):
            return self.global_mean
        raise ValidationException(f"Unknown statistic: {source}")

    def lookup(self, source: str, ids: Sequence[int]) -> np.ndarray:
        """Statistic for each id, imputing the fallback for unseen ids."""
        series = self.values(source)
        found = series.reindex(np.asarray(ids, dtype=np.int64))
        return found.fillna(self.fallback(source)).to_numpy(dtype=np.float64)

    def favorite_genre(self, user_id: int) -> Optional[str]:
        genre = self.user_favorite_genre.get(user_id)
        return None if genre is None or pd.isna(genre) else str(genre)


def compute_stats(
    train: pd.DataFrame,
    movies: Optional[pd.DataFrame] = None,
    genres: Sequence[str] = (),
) -> InteractionStats:
    """
    Compute means and counts from training ratings.

    Args:
        train: Frame with user_id, item_id, rating
        movies: Optional item_id/genres table for each user's favorite genre
        genres: Genre order used to break ties between favorite genres

    Returns:
        Statistics with fallbacks

    Raises:
        EmptyInputError: If train has no rows
    """
    if len(train) == 0:
        raise EmptyInputError("statistics need at least one training interaction")
    by_item = train.groupby("item_id")["rating"]
    item_count = by_item.size()
    favorites = (
        _favorite_genres(train, movies, genres)
        if movies is not None
        else pd.Series(dtype=object)
    )
    return InteractionStats(
        item_mean=by_item.mean(),
        item_count=item_count,
        user_mean=train.groupby("user_id")["rating"].mean(),
        global_mean=float(train["rating"].mean()),
        global_item_count=float(item_count.mean()),
        user_favorite_genre=favorites,
    )


def _favorite_genres(
    train: pd.DataFrame, movies: pd.DataFrame, genres: Sequence[str]
) -> pd.Series:
    rated = train.loc[:, ["user_id", "item_id", "rating"]].merge(
        movies.loc[:, ["item_id", "genres"]], on="item_id", how="inner"
    )
    exploded = rated.explode("genres").dropna(subset=["genres"])
    if exploded.empty:
        return pd.Series(dtype=object)
    table = exploded.groupby(["user_id", "genres"])["rating"].mean().unstack("genres")
    order = list(genres) or sorted(table.columns)
    table = table.reindex(columns=[g for g in order if g in table.columns])
    # idxmax keeps the first column on ties, i.e. the earliest genre in order
    return table.idxmax(axis=1, skipna=True)


def percentile(values: Sequence[float], p: float) -> float:
    """
    Nearest-rank percentile: the ceil(p/100 * N)-th smallest value.

    Raises:
        EmptyInputError: If values is empty
        ValidationException: If p is outside (0, 100]
    """
    ordered = np.sort(np.asarray(values, dtype=np.float64).ravel())
    if ordered.size == 0:
        raise EmptyInputError("percentile of an empty multiset")
    if not 0 < p <= 100:
        raise ValidationException(f"percentile must be in (0, 100], got {p}")
    rank = max(math.ceil(p / 100.0 * ordered.size), 1)
    return float(ordered[rank - 1])


def candidate_thresholds(
    stats: InteractionStats, percentiles: Sequence[float] = DEFAULT_PERCENTILES
) -> Dict[str, List[float]]:
    """
    Distinct percentile thresholds per statistic, ascending.

    Percentiles are taken over per-entity values (one value per item or per
    user), not per rating.
    """
    candidates: Dict[str, List[float]] = {}
    for source in STAT_SOURCES:
        values = stats.values(source).to_numpy()
        candidates[source] = sorted({percentile(values, p) for p in percentiles})
    return candidates


def median_thresholds(stats: InteractionStats) -> Dict[str, float]:
    """50th-percentile threshold per statistic."""
    return {source: percentile(stats.values(source).to_numpy(), 50) for source in STAT_SOURCES}

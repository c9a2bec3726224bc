"""Ranking and metrics report data models."""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from fuzzyrec.domain.exceptions.exception import (
    EmptyInputError,
    ShapeMismatchError,
    ValidationException,
)

METRICS = ("precision", "recall", "ndcg", "map")

MetricKey = Tuple[str, int]


class ScoredItem(NamedTuple):
    item_id: int
    score: float
    relevant: int


@dataclass(frozen=True)
class UserRanking:
    """One user's candidates ordered by score descending, then item id ascending."""

    user_id: int
    items: Tuple[ScoredItem, ...]

    def __post_init__(self):
        if not self.items:
            raise EmptyInputError(f"user {self.user_id} has no candidates")
        for before, after in zip(self.items, self.items[1:]):
            if (-before.score, before.item_id) > (-after.score, after.item_id):
                raise ValidationException(f"ranking of user {self.user_id} is not sorted")

    def __len__(self) -> int:
        return len(self.items)

    @property
    def relevance(self) -> np.ndarray:
        return np.fromiter((item.relevant for item in self.items), dtype=np.float64)

    @property
    def item_ids(self) -> List[int]:
        return [item.item_id for item in self.items]

    @property
    def n_relevant(self) -> int:
        return int(sum(item.relevant for item in self.items))


@dataclass(frozen=True)
class CandidateSet:
    """Scored candidates: one row per (user, item) pair to rank.

    Attributes:
        user_ids: (N,) user of each row
        item_ids: (N,) item of each row
        relevant: (N,) 1 for a relevant test item
        atoms: Optional (N, n) atom matrix for atom-based scorers
    """

    user_ids: np.ndarray
    item_ids: np.ndarray
    relevant: np.ndarray
    atoms: Optional[np.ndarray] = None

    def __post_init__(self):
        n = len(self.user_ids)
        if len(self.item_ids) != n or len(self.relevant) != n:
            raise ShapeMismatchError("candidate columns differ in length")
        if self.atoms is not None and self.atoms.shape[0] != n:
            raise ShapeMismatchError(f"{self.atoms.shape[0]} atom rows for {n} candidates")

    def __len__(self) -> int:
        return len(self.user_ids)


@dataclass(frozen=True)
class MetricValue:
    """Across-seed summary of one metric at one cutoff."""

    metric: str
    k: int
    mean: float
    std: float
    n_seeds: int
    std_defined: bool = True


@dataclass
class MetricsReport:
    """Metric means and standard deviations over seeded runs.

    Attributes:
        values: One entry per (metric, k), in METRICS then k order
        runs: Per-run user-averaged values
        seeds: Seed of each run
    """

    values: List[MetricValue]
    runs: List[Dict[MetricKey, float]] = field(default_factory=list)
    seeds: List[int] = field(default_factory=list)

    @classmethod
    def from_runs(
        cls, runs: Sequence[Mapping[MetricKey, float]], seeds: Iterable[int] = ()
    ) -> "MetricsReport":
        """
        Aggregate per-run values.

        The standard deviation is the sample deviation (ddof=1); a single run
        reports 0 with std_defined False.
        """
        if not runs:
            raise EmptyInputError("a report needs at least one run")
        keys = list(runs[0].keys())
        ks = sorted({k for _, k in keys})
        values = []
        for metric in METRICS:
            for k in ks:
                if (metric, k) not in runs[0]:
                    continue
                column = np.array([run[(metric, k)] for run in runs], dtype=np.float64)
                single = len(column) == 1
                values.append(
                    MetricValue(
                        metric=metric,
                        k=k,
                        mean=float(column.mean()),
                        std=0.0 if single else float(column.std(ddof=1)),
                        n_seeds=len(column),
                        std_defined=not single,
                    )
                )
        return cls(values=values, runs=[dict(run) for run in runs], seeds=list(seeds))

    def get(self, metric: str, k: int) -> MetricValue:
        for value in self.values:
            if value.metric == metric and value.k == k:
                return value
        raise KeyError((metric, k))

    @property
    def ks(self) -> List[int]:
        return sorted({value.k for value in self.values})

    def rows(self) -> List[Tuple[str, int, float, float, int]]:
        """CSV rows: metric, k, mean, std, n_seeds."""
        return [(v.metric, v.k, v.mean, v.std, v.n_seeds) for v in self.values]

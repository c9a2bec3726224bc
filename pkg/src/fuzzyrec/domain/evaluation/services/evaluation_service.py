"""
Evaluation domain service - ranks candidates per user and averages metrics.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from fuzzyrec.domain.evaluation.models.report import (
    METRICS,
    CandidateSet,
    MetricKey,
    MetricsReport,
    UserRanking,
)
from fuzzyrec.domain.evaluation.services.ranking_metrics import rank_user, user_metrics
from fuzzyrec.domain.exceptions.exception import (
    EmptyInputError,
    ShapeMismatchError,
    ValidationException,
)
from fuzzyrec.domain.interfaces.scorer import IScorer

logger = logging.getLogger(__name__)


def rank_candidates(candidates: CandidateSet, scores: np.ndarray) -> List[UserRanking]:
    """Rankings of every user with at least one candidate, by user id."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape != (len(candidates),):
        raise ShapeMismatchError(f"{scores.shape} scores for {len(candidates)} candidates")
    order = np.argsort(candidates.user_ids, kind="stable")
    users = candidates.user_ids[order]
    starts = np.flatnonzero(np.r_[True, users[1:] != users[:-1]])
    ends = np.r_[starts[1:], len(users)]
    return [
        rank_user(
            int(users[start]),
            candidates.item_ids[order[start:end]],
            scores[order[start:end]],
            candidates.relevant[order[start:end]],
        )
        for start, end in zip(starts, ends)
    ]


def aggregate(
    per_user: Sequence[Dict[MetricKey, float]], ks: Sequence[int]
) -> Dict[MetricKey, float]:
    """
    Mean over users of each metric.

    Precision averages over every user; the other metrics over users that
    reported them (at least one relevant item). A metric no user reported
    is 0.
    """
    result: Dict[MetricKey, float] = {}
    for metric in METRICS:
        for k in ks:
            column = [values[(metric, k)] for values in per_user if (metric, k) in values]
            if not column:
                logger.warning(f"No user has relevant items; {metric}@{k} reported as 0")
            result[(metric, k)] = float(np.mean(column)) if column else 0.0
    return result


class EvaluationService:
    """Service for scoring and evaluating rankings."""

    def __init__(self, ks: Sequence[int] = (5, 10), threads: Optional[int] = None):
        """
        Initialize with cutoffs and parallelism.

        Args:
            ks: Cutoffs to report
            threads: Worker threads for per-user metrics (default: CPU count)
        """
        if not ks or any(k <= 0 for k in ks):
            raise ValidationException(f"ks must be positive, got {ks}")
        self.ks = tuple(ks)
        self.threads = threads or os.cpu_count() or 1

    def evaluate_run(self, scorer: IScorer, candidates: CandidateSet) -> Dict[MetricKey, float]:
        """User-averaged metrics of one scorer on one candidate set."""
        if len(candidates) == 0:
            raise EmptyInputError("evaluation needs a nonempty test set")
        rankings = rank_candidates(candidates, scorer.score(candidates))
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            per_user = list(pool.map(lambda r: user_metrics(r, self.ks), rankings))
        logger.debug(f"Evaluated {len(rankings)} users on {len(candidates)} candidates")
        return aggregate(per_user, self.ks)

    def evaluate(
        self, scorer: IScorer, candidates: CandidateSet, seed: Optional[int] = None
    ) -> MetricsReport:
        """
        Evaluate one scorer.

        Returns:
            Single-run report
        """
        run = self.evaluate_run(scorer, candidates)
        return MetricsReport.from_runs([run], seeds=[] if seed is None else [seed])

    def repeat_evaluate(
        self,
        run_once: Callable[[int], Dict[MetricKey, float]],
        n_runs: int = 10,
        seed: int = 0,
    ) -> MetricsReport:
        """
        Repeat a train-and-evaluate run with seeds seed, seed+1, ...

        Args:
            run_once: Maps a seed to that run's user-averaged metrics
            n_runs: Number of runs (>= 1)
            seed: First seed

        Returns:
            Report with mean and sample standard deviation
        """
        if n_runs < 1:
            raise ValidationException(f"n_runs must be at least 1, got {n_runs}")
        seeds = [seed + i for i in range(n_runs)]
        runs = []
        for run_seed in seeds:
            runs.append(run_once(run_seed))
            logger.info(f"Run seed={run_seed} done ({len(runs)}/{n_runs})")
        return MetricsReport.from_runs(runs, seeds=seeds)


def evaluate(
    scorer: IScorer,
    candidates: CandidateSet,
    ks: Sequence[int] = (5, 10),
    threads: Optional[int] = None,
) -> MetricsReport:
    """Single-run report of a scorer."""
    return EvaluationService(ks, threads).evaluate(scorer, candidates)


def repeat_evaluate(
    run_once: Callable[[int], Dict[MetricKey, float]],
    n_runs: int = 10,
    seed: int = 0,
    ks: Sequence[int] = (5, 10),
) -> MetricsReport:
    """Report over n_runs seeded runs."""
    return EvaluationService(ks).repeat_evaluate(run_once, n_runs, seed)

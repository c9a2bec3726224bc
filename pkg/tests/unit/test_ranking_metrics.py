"""Unit tests for ranking metrics and the evaluation service."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from tests.mocks import FixedScorer

from fuzzyrec.domain.evaluation.models.report import (
    CandidateSet,
    MetricsReport,
    ScoredItem,
    UserRanking,
)
from fuzzyrec.domain.evaluation.services.evaluation_service import (
    EvaluationService,
    aggregate,
    evaluate,
    rank_candidates,
    repeat_evaluate,
)
from fuzzyrec.domain.evaluation.services.ranking_metrics import (
    map_at_k,
    ndcg_at_k,
    precision_at_k,
    rank_user,
    recall_at_k,
    user_metrics,
)
from fuzzyrec.domain.exceptions.exception import (
    EmptyInputError,
    ShapeMismatchError,
    ValidationException,
)


def ranking_of(relevance) -> UserRanking:
    """Ranking whose order is the given relevance pattern."""
    n = len(relevance)
    return rank_user(1, list(range(1, n + 1)), [n - i for i in range(n)], relevance)


class TestRankUser:
    def test_order_preserved(self):
        assert rank_user(1, [1, 2], [0.9, 0.1], [1, 0]).item_ids == [1, 2]

    def test_ties_broken_by_item_id(self):
        ranking = rank_user(1, [9, 2, 7], [0.5, 0.5, 0.7], [0, 0, 1])
        assert ranking.item_ids == [7, 2, 9]

    def test_equal_scores_ascending_ids(self):
        assert rank_user(1, [5, 3, 4], [0.2, 0.2, 0.2], [0, 0, 0]).item_ids == [3, 4, 5]

    def test_no_candidates(self):
        with pytest.raises(EmptyInputError):
            rank_user(1, [], [], [])

    def test_length_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            rank_user(1, [1, 2], [0.1], [0, 1])

    def test_unsorted_ranking_rejected(self):
        with pytest.raises(ValidationException):
            UserRanking(1, (ScoredItem(1, 0.1, 0), ScoredItem(2, 0.9, 1)))


class TestMetricExamples:
    def test_all_top5_relevant(self):
        assert precision_at_k(ranking_of([1, 1, 1, 1, 1, 0]), 5) == 1.0

    def test_precision_divides_by_k_for_short_lists(self):
        assert precision_at_k(ranking_of([1, 1]), 5) == pytest.approx(0.4)

    def test_recall_both_relevant_in_top10(self):
        assert recall_at_k(ranking_of([0, 1, 0, 0, 1, 0, 0]), 10) == 1.0

    def test_ndcg_perfect(self):
        assert ndcg_at_k(ranking_of([1, 1, 0, 0]), 5) == pytest.approx(1.0)

    def test_ndcg_no_hits_in_top_k(self):
        assert ndcg_at_k(ranking_of([0, 0, 1]), 2) == 0.0

    def test_ndcg_worked_example(self):
        assert ndcg_at_k(ranking_of([0, 1, 1, 0, 0]), 5) == pytest.approx(0.6934, abs=1e-4)

    def test_map_single_relevant_at_second_position(self):
        assert map_at_k(ranking_of([0, 1, 0, 0, 0]), 5) == pytest.approx(0.5)

    def test_map_perfect_with_more_relevant_than_k(self):
        assert map_at_k(ranking_of([1] * 12), 10) == pytest.approx(1.0)

    def test_map_no_hits(self):
        assert map_at_k(ranking_of([0, 0, 0, 1]), 3) == 0.0

    def test_undefined_without_relevant_items(self):
        ranking = ranking_of([0, 0, 0])
        for metric in (recall_at_k, ndcg_at_k, map_at_k):
            with pytest.raises(EmptyInputError):
                metric(ranking, 5)
        assert precision_at_k(ranking, 5) == 0.0

    def test_non_positive_k(self):
        with pytest.raises(ValidationException):
            precision_at_k(ranking_of([1]), 0)

    def test_user_metrics_omit_undefined(self):
        values = user_metrics(ranking_of([0, 0]), [5])
        assert set(values) == {("precision", 5)}


def _oracle(relevance, k):
    """Textbook definitions, evaluated one position at a time."""
    total = sum(relevance)
    top = relevance[:k]
    precision = sum(top) / k
    recall = sum(top) / total
    dcg = sum(rel / math.log2(pos + 2) for pos, rel in enumerate(top))
    idcg = sum(1 / math.log2(pos + 2) for pos in range(min(total, k)))
    hits, ap = 0, 0.0
    for pos, rel in enumerate(top, start=1):
        if rel:
            hits += 1
            ap += hits / pos
    return precision, recall, dcg / idcg, ap / min(total, k)


class TestBruteForceOracle:
    def test_every_pattern_up_to_six_items(self):
        for length in range(1, 7):
            for pattern in itertools.product((0, 1), repeat=length):
                if not any(pattern):
                    continue
                ranking = ranking_of(list(pattern))
                for k in (1, 3, 5, 10):
                    expected = _oracle(list(pattern), k)
                    actual = (
                        precision_at_k(ranking, k),
                        recall_at_k(ranking, k),
                        ndcg_at_k(ranking, k),
                        map_at_k(ranking, k),
                    )
                    assert actual == pytest.approx(expected, abs=1e-12), (pattern, k)


class TestMetricProperties:
    @given(
        st.lists(st.integers(0, 1), min_size=1, max_size=30).filter(any),
        st.integers(1, 15),
    )
    def test_values_in_unit_interval(self, relevance, k):
        ranking = ranking_of(relevance)
        for metric in (precision_at_k, recall_at_k, ndcg_at_k, map_at_k):
            assert 0.0 <= metric(ranking, k) <= 1.0 + 1e-12

    @given(
        st.lists(
            st.tuples(st.floats(0, 1, allow_nan=False), st.integers(0, 1)),
            min_size=1,
            max_size=20,
        ),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=100)
    def test_candidate_order_does_not_matter(self, rows, rnd):
        """Test that shuffling the candidate list leaves the ranking unchanged."""
        items = list(range(1, len(rows) + 1))
        scores = [score for score, _ in rows]
        relevant = [rel for _, rel in rows]
        shuffled = list(zip(items, scores, relevant))
        rnd.shuffle(shuffled)
        a = rank_user(3, items, scores, relevant)
        b = rank_user(3, *map(list, zip(*shuffled)))
        assert a == b

    @given(st.lists(st.integers(0, 1), min_size=2, max_size=12).filter(any))
    def test_monotone_rescaling_of_scores(self, relevance):
        n = len(relevance)
        scores = np.linspace(0.9, 0.1, n)
        a = rank_user(1, list(range(n)), scores, relevance)
        b = rank_user(1, list(range(n)), scores**3 * 0.5, relevance)
        assert user_metrics(a, [5]) == user_metrics(b, [5])


class TestEvaluationService:
    @pytest.fixture
    def candidates(self) -> CandidateSet:
        return CandidateSet(
            user_ids=np.array([2, 1, 1, 2, 1, 3]),
            item_ids=np.array([10, 10, 11, 11, 12, 10]),
            relevant=np.array([1, 0, 1, 0, 0, 0]),
        )

    def test_rank_candidates_groups_by_user(self, candidates):
        rankings = rank_candidates(candidates, np.array([0.1, 0.9, 0.5, 0.8, 0.2, 0.3]))
        assert [r.user_id for r in rankings] == [1, 2, 3]
        assert rankings[0].item_ids == [10, 11, 12]
        assert rankings[1].item_ids == [11, 10]

    def test_rank_candidates_score_length(self, candidates):
        with pytest.raises(ShapeMismatchError):
            rank_candidates(candidates, np.zeros(2))

    def test_evaluate_run_averages(self, candidates):
        service = EvaluationService(ks=(1,), threads=2)
        values = service.evaluate_run(
            FixedScorer([0.1, 0.9, 0.5, 0.8, 0.2, 0.3]), candidates
        )
        # user 1 puts item 10 (irrelevant) first, user 2 puts 11 (irrelevant) first
        assert values[("precision", 1)] == pytest.approx(0.0)
        assert values[("recall", 1)] == pytest.approx(0.0)
        values = service.evaluate_run(
            FixedScorer([0.9, 0.1, 0.5, 0.2, 0.2, 0.3]), candidates
        )
        # precision over all three users, recall over the two with relevant items
        assert values[("precision", 1)] == pytest.approx(2 / 3)
        assert values[("recall", 1)] == pytest.approx(1.0)

    def test_empty_test_set(self):
        empty = CandidateSet(np.array([], int), np.array([], int), np.array([], int))
        with pytest.raises(EmptyInputError):
            EvaluationService().evaluate_run(FixedScorer([]), empty)

    def test_aggregate_without_relevant_users(self):
        assert aggregate([{("precision", 5): 0.0}], [5])[("map", 5)] == 0.0

    def test_evaluate_returns_single_run_report(self, candidates):
        report = evaluate(FixedScorer(np.linspace(1, 0, 6)), candidates, ks=(5, 10))
        value = report.get("precision", 5)
        assert value.n_seeds == 1 and not value.std_defined and value.std == 0.0
        assert report.ks == [5, 10]

    def test_repeat_evaluate_uses_consecutive_seeds(self):
        seen = []

        def run_once(seed):
            seen.append(seed)
            return {("precision", 5): seed / 10, ("recall", 5): 0.5}

        report = repeat_evaluate(run_once, n_runs=3, seed=4, ks=(5,))
        assert seen == [4, 5, 6]
        assert report.seeds == [4, 5, 6]
        precision = report.get("precision", 5)
        assert precision.mean == pytest.approx(0.5)
        assert precision.std == pytest.approx(0.1)
        assert report.get("recall", 5).std == 0.0

    def test_repeat_evaluate_needs_a_run(self):
        with pytest.raises(ValidationException):
            repeat_evaluate(lambda seed: {}, n_runs=0)

    def test_invalid_ks(self):
        with pytest.raises(ValidationException):
            EvaluationService(ks=(0,))


class TestMetricsReport:
    def test_rows_follow_metric_then_k_order(self):
        runs = [{("recall", 10): 0.2, ("precision", 5): 0.1, ("precision", 10): 0.3}]
        report = MetricsReport.from_runs(runs, [0])
        assert [(row[0], row[1]) for row in report.rows()] == [
            ("precision", 5),
            ("precision", 10),
            ("recall", 10),
        ]

    def test_unknown_metric(self):
        report = MetricsReport.from_runs([{("precision", 5): 0.1}], [0])
        with pytest.raises(KeyError):
            report.get("ndcg", 5)

    def test_no_runs(self):
        with pytest.raises(EmptyInputError):
            MetricsReport.from_runs([])

"""Unit tests for atom catalogs, statistics, atomization and threshold selection."""

import numpy as np
import pandas as pd
import pytest

from fuzzyrec.domain.atoms.models.catalog import (
    AtomCatalog,
    AtomDef,
    AtomKind,
    format_threshold,
    short_name,
)
from fuzzyrec.domain.atoms.services.atomizer import (
    MOVIELENS,
    SYNTHETIC,
    Atomizer,
    MovieProfile,
    UserProfile,
    atomize,
    build_catalog,
    decade_key,
    synthetic_atoms,
)
from fuzzyrec.domain.atoms.services.statistics import (
    ITEM_MEAN_RATING,
    ITEM_RATING_COUNT,
    USER_MEAN_RATING,
    candidate_thresholds,
    compute_stats,
    median_thresholds,
    percentile,
)
from fuzzyrec.domain.atoms.services.threshold_selection import (
    choose_thresholds,
    select_threshold_atoms,
    select_thresholds,
)
from fuzzyrec.domain.data.models.synthetic import SYNTHETIC_ATOMS
from fuzzyrec.domain.data.services.splitting import temporal_split
from fuzzyrec.domain.exceptions.exception import (
    ConfigurationException,
    EmptyInputError,
    ValidationException,
)
from fuzzyrec.domain.network.models.rule_network import RuleNetwork
from fuzzyrec.domain.training.models.labeled_atoms import LabeledAtoms
from tests.mocks import StubTrainer

SCALAR_THRESHOLDS = {ITEM_MEAN_RATING: 3.5, USER_MEAN_RATING: 3.0, ITEM_RATING_COUNT: 6.0}


@pytest.fixture
def ratings() -> pd.DataFrame:
    return pd.DataFrame(
        {
            "user_id": [1, 1, 1, 2, 2, 3],
            "item_id": [10, 11, 12, 10, 11, 10],
            "rating": [5.0, 1.0, 4.0, 3.0, 5.0, 4.0],
            "timestamp": [1, 2, 3, 4, 5, 6],
        }
    )


@pytest.fixture
def movies() -> pd.DataFrame:
    return pd.DataFrame(
        {
            "item_id": [10, 11, 12],
            "title": ["A (1995)", "B (1942)", "C"],
            "year": [1995.0, 1942.0, float("nan")],
            "genres": [("Comedy", "Drama"), ("Drama",), ("Comedy",)],
        }
    )


class TestAtomDef:
    def test_stat_atom_needs_threshold(self):
        with pytest.raises(ValidationException):
            AtomDef("X", AtomKind.ITEM_STAT_THRESHOLD, ITEM_MEAN_RATING)

    def test_indicator_rejects_threshold(self):
        with pytest.raises(ValidationException):
            AtomDef("X", AtomKind.USER_INDICATOR, "gender:F", threshold=1.0)

    def test_blank_name(self):
        with pytest.raises(ValidationException):
            AtomDef("  ", AtomKind.USER_INDICATOR, "gender:F")

    def test_kind_parse(self):
        assert AtomKind.parse("item-indicator") is AtomKind.ITEM_INDICATOR
        with pytest.raises(ConfigurationException):
            AtomKind.parse("bogus")

    def test_format_threshold(self):
        assert format_threshold(4.0) == "4.0"
        assert format_threshold(228) == "228.0"
        assert format_threshold(3.5714) == "3.57"

    def test_short_name(self):
        assert short_name("HIGH AVG MOVIE RATING (4.0+)") == "HIGH AVG MOVIE RATING"
        assert short_name("GENRE DRAMA") == "GENRE DRAMA"


class TestAtomCatalog:
    def test_duplicate_names_rejected(self):
        atom = AtomDef("A", AtomKind.USER_INDICATOR, "gender:F")
        with pytest.raises(ValidationException):
            AtomCatalog([atom, atom])

    def test_empty_rejected(self):
        with pytest.raises(ValidationException):
            AtomCatalog([])

    def test_positions(self):
        catalog = build_catalog(SYNTHETIC)
        assert catalog.names == list(SYNTHETIC_ATOMS)
        assert catalog.index_of("RECENT") == 2
        assert catalog[5].name == "COOKIE"
        with pytest.raises(ValidationException):
            catalog.index_of("MISSING")

    def test_subset_keeps_order(self):
        catalog = build_catalog(SYNTHETIC)
        assert catalog.subset([4, 0, 4]).names == ["HIGH", "DIRECTOR"]

    def test_equality(self):
        assert build_catalog(SYNTHETIC) == build_catalog(SYNTHETIC)


class TestBuildCatalog:
    def test_movielens_with_scalar_thresholds(self):
        catalog = build_catalog(MOVIELENS, thresholds=SCALAR_THRESHOLDS)
        assert len(catalog) == 80
        assert sum(atom.kind.is_stat_threshold for atom in catalog) == 3
        assert "HIGH AVG MOVIE RATING (3.5+)" in catalog.names
        assert "MOVIE RATED OFTEN (6.0+)" in catalog.names

    def test_movielens_indicator_groups(self):
        catalog = build_catalog(MOVIELENS, thresholds=SCALAR_THRESHOLDS)
        kinds = [atom.kind for atom in catalog]
        assert kinds.count(AtomKind.USER_INDICATOR) == 30
        assert kinds.count(AtomKind.ITEM_INDICATOR) == 29
        assert kinds.count(AtomKind.INTERACTION_DERIVED) == 18

    def test_candidate_lists(self):
        thresholds = {ITEM_MEAN_RATING: [3.0, 4.0], USER_MEAN_RATING: [3.5], ITEM_RATING_COUNT: [1]}
        catalog = build_catalog(MOVIELENS, thresholds=thresholds)
        assert len(catalog) == 81
        assert len(catalog.by_source(ITEM_MEAN_RATING)) == 2

    def test_movielens_needs_stats_or_thresholds(self):
        with pytest.raises(ValidationException):
            build_catalog(MOVIELENS)

    def test_missing_statistic(self):
        with pytest.raises(ValidationException):
            build_catalog(MOVIELENS, thresholds={ITEM_MEAN_RATING: 3.0})

    def test_unknown_kind(self):
        with pytest.raises(ConfigurationException):
            build_catalog("netflix")


class TestStatistics:
    def test_means_and_counts(self, ratings):
        stats = compute_stats(ratings)
        assert stats.item_mean[10] == pytest.approx(4.0)
        assert stats.item_count[10] == 3
        assert stats.user_mean[1] == pytest.approx(10 / 3)
        assert stats.global_mean == pytest.approx(22 / 6)
        assert stats.global_item_count == pytest.approx(2.0)

    def test_unseen_entities_use_fallback(self, ratings):
        stats = compute_stats(ratings)
        np.testing.assert_allclose(
            stats.lookup(ITEM_MEAN_RATING, [10, 99]), [4.0, stats.global_mean]
        )
        assert stats.lookup(ITEM_RATING_COUNT, [99])[0] == pytest.approx(2.0)
        assert stats.lookup(USER_MEAN_RATING, [42])[0] == pytest.approx(stats.global_mean)

    def test_empty_train(self):
        with pytest.raises(EmptyInputError):
            compute_stats(pd.DataFrame(columns=["user_id", "item_id", "rating"]))

    def test_favorite_genre(self, ratings, movies):
        stats = compute_stats(ratings, movies, ("Comedy", "Drama"))
        # user 1: Comedy (5, 4) beats Drama (5, 1)
        assert stats.favorite_genre(1) == "Comedy"
        # user 2: Drama (3, 5) beats Comedy (3)
        assert stats.favorite_genre(2) == "Drama"
        # user 3: tie between Comedy and Drama goes to the earlier genre
        assert stats.favorite_genre(3) == "Comedy"
        assert stats.favorite_genre(99) is None


class TestPercentile:
    def test_nearest_rank(self):
        values = [15, 20, 35, 40, 50]
        assert percentile(values, 5) == 15
        assert percentile(values, 30) == 20
        assert percentile(values, 40) == 20
        assert percentile(values, 50) == 35
        assert percentile(values, 100) == 50

    def test_order_does_not_matter(self):
        assert percentile([3, 1, 2], 50) == 2

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            percentile([], 50)

    def test_out_of_range(self):
        with pytest.raises(ValidationException):
            percentile([1.0], 0)

    def test_candidates_are_distinct_and_sorted(self, ratings):
        stats = compute_stats(ratings)
        candidates = candidate_thresholds(stats)
        assert candidates[ITEM_RATING_COUNT] == [1.0, 2.0, 3.0]
        for values in candidates.values():
            assert values == sorted(set(values))

    def test_medians(self, ratings):
        medians = median_thresholds(compute_stats(ratings))
        assert medians[ITEM_RATING_COUNT] == 2.0
        assert medians[ITEM_MEAN_RATING] == 4.0


class TestAtomize:
    @pytest.fixture
    def catalog(self) -> AtomCatalog:
        return build_catalog(MOVIELENS, thresholds=SCALAR_THRESHOLDS)

    def test_profile_atoms(self, ratings, movies, catalog):
        stats = compute_stats(ratings, movies)
        user = UserProfile(user_id=1, gender="F", age=25, occupation=12)
        item = MovieProfile(item_id=10, genres=frozenset({"Comedy", "Drama"}), year=1995)
        vector = atomize(user, item, stats, catalog)
        on = {catalog[j].name for j in np.flatnonzero(vector)}
        assert on == {
            "GENDER FEMALE",
            "AGE 25-34",
            "OCCUPATION PROGRAMMER",
            "GENRE COMEDY",
            "GENRE DRAMA",
            "FAVORITE GENRE COMEDY",
            "RELEASED 1995-1999",
            "HIGH AVG MOVIE RATING (3.5+)",
            "HIGH AVG RATING PER USER (3.0+)",
        }
        assert vector.dtype == np.uint8

    def test_unknown_user_has_no_demographics(self, ratings, movies, catalog):
        stats = compute_stats(ratings, movies)
        vector = atomize(UserProfile(user_id=77), MovieProfile(item_id=12), stats, catalog)
        on = {catalog[j].name for j in np.flatnonzero(vector)}
        # unseen user gets the global mean 3.67, item 12 has mean 4.0 from one rating
        assert on == {
            "RELEASE YEAR UNKNOWN",
            "HIGH AVG MOVIE RATING (3.5+)",
            "HIGH AVG RATING PER USER (3.0+)",
        }

    def test_decade_bins(self):
        assert decade_key(1929) == "pre1930"
        assert decade_key(1930) == "1930s"
        assert decade_key(1994) == "1990-1994"
        assert decade_key(1995) == "1995-1999"
        assert decade_key(2000) == "2000s"
        assert decade_key(float("nan")) == "unknown"
        assert decade_key(None) == "unknown"

    def test_frame_matches_pairwise(self, movielens_data):
        split = temporal_split(movielens_data.ratings)
        stats = compute_stats(split.train, movielens_data.movies)
        catalog = build_catalog(MOVIELENS, stats, thresholds=median_thresholds(stats))
        atomizer = Atomizer(movielens_data.users, movielens_data.movies, stats, catalog)
        pairs = movielens_data.ratings.loc[:, ["user_id", "item_id"]]
        matrix = atomizer.atomize_frame(pairs, chunk_size=7, threads=2)
        assert matrix.shape == (48, 80)
        for row, (user_id, item_id) in enumerate(pairs.itertuples(index=False)):
            np.testing.assert_array_equal(matrix[row], atomizer.atomize_pair(user_id, item_id))

    def test_empty_frame(self, movielens_data):
        stats = compute_stats(movielens_data.ratings, movielens_data.movies)
        catalog = build_catalog(MOVIELENS, thresholds=SCALAR_THRESHOLDS)
        atomizer = Atomizer(movielens_data.users, movielens_data.movies, stats, catalog)
        empty = pd.DataFrame({"user_id": [], "item_id": []})
        assert atomizer.atomize_frame(empty).shape == (0, 80)

    def test_test_ratings_never_reach_atoms(self, movielens_data):
        """Test that atoms depend on training ratings only."""
        split = temporal_split(movielens_data.ratings)
        stats = compute_stats(split.train, movielens_data.movies)
        catalog = build_catalog(MOVIELENS, thresholds=median_thresholds(stats))
        before = Atomizer(movielens_data.users, movielens_data.movies, stats, catalog)
        poisoned = split.test.assign(rating=1.0)
        expected = before.atomize_frame(split.test)

        stats_again = compute_stats(split.train, movielens_data.movies)
        after = Atomizer(movielens_data.users, movielens_data.movies, stats_again, catalog)
        np.testing.assert_array_equal(after.atomize_frame(poisoned), expected)

    def test_synthetic_atoms_follow_catalog(self, synthetic_corpus):
        catalog = build_catalog(SYNTHETIC).subset([0, 5])
        np.testing.assert_array_equal(
            synthetic_atoms(synthetic_corpus.frame, catalog),
            synthetic_corpus.atoms(("HIGH", "COOKIE")),
        )


class TestThresholdSelection:
    @pytest.fixture
    def candidates(self) -> AtomCatalog:
        return build_catalog(
            MOVIELENS,
            thresholds={
                ITEM_MEAN_RATING: [3.0, 4.0],
                USER_MEAN_RATING: [3.5],
                ITEM_RATING_COUNT: [5.0, 10.0],
            },
        )

    def test_best_weight_wins(self, candidates):
        weights = np.full((2, len(candidates)), -10.0)
        weights[1, 78] = 5.0
        weights[0, 79] = 0.0
        selection = choose_thresholds(
            RuleNetwork(weights), candidates, {ITEM_RATING_COUNT: 10.0}
        )
        assert selection.chosen[ITEM_MEAN_RATING] == 4.0
        assert selection.chosen[USER_MEAN_RATING] == 3.5
        assert len(selection.catalog) == 80
        assert selection.kept_positions == list(range(77)) + [78, 79, 81]

    def test_degenerate_statistic_keeps_median(self, candidates):
        weights = np.full((1, len(candidates)), -10.0)
        weights[0, 77] = 3.0
        selection = choose_thresholds(
            RuleNetwork(weights), candidates, {ITEM_RATING_COUNT: 10.0}
        )
        assert selection.chosen[ITEM_RATING_COUNT] == 10.0
        assert ITEM_RATING_COUNT in selection.degenerate
        assert ITEM_MEAN_RATING not in selection.degenerate

    def test_ties_go_to_lowest_threshold(self, candidates):
        weights = np.zeros((1, len(candidates)))
        selection = choose_thresholds(RuleNetwork(weights), candidates, {})
        assert selection.chosen[ITEM_MEAN_RATING] == 3.0
        assert selection.chosen[ITEM_RATING_COUNT] == 5.0

    def test_select_columns(self, candidates):
        selection = choose_thresholds(
            RuleNetwork(np.zeros((1, len(candidates)))), candidates, {}
        )
        atoms = np.arange(2 * len(candidates)).reshape(2, -1)
        reduced = selection.select_columns(atoms)
        assert reduced.shape == (2, 80)
        assert reduced[0, -1] == 80

    def test_select_thresholds_trains_on_candidates(self, candidates):
        weights = np.full((1, len(candidates)), -10.0)
        weights[0, [77, 79, 81]] = 2.0
        trainer = StubTrainer(weights)
        train = LabeledAtoms(np.zeros((3, len(candidates))), np.array([0, 1, 0]))
        selection = select_thresholds(train, None, candidates, trainer, {})
        assert len(trainer.seen) == 1 and trainer.seen[0][0] is train
        assert selection.chosen == {
            ITEM_MEAN_RATING: 3.0,
            USER_MEAN_RATING: 3.5,
            ITEM_RATING_COUNT: 10.0,
        }
        pruned = select_threshold_atoms(train, None, candidates, trainer)
        assert pruned == selection.catalog

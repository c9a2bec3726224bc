"""Unit tests for the objective, the Adam step and the training service."""

import math

import numpy as np
import pytest

from fuzzyrec.domain.data.models.synthetic import SYNTHETIC_ATOMS
from fuzzyrec.domain.exceptions.exception import (
    EmptyInputError,
    ShapeMismatchError,
    TrainingException,
    ValidationException,
)
from fuzzyrec.domain.network.models.rule_network import Gradient, RuleNetwork
from fuzzyrec.domain.training.models.adam_state import AdamState
from fuzzyrec.domain.training.models.labeled_atoms import LabeledAtoms
from fuzzyrec.domain.training.services.objective import (
    evaluate_objective,
    loss,
    loss_gradient,
    objective_and_gradient,
    regularization,
)
from fuzzyrec.domain.training.services.optimizer import adam_step
from fuzzyrec.domain.training.services.training_service import (
    TrainingService,
    restart_seeds,
    train,
)
from fuzzyrec.infrastructure.config.settings import TrainConfig


def _dataset(corpus) -> LabeledAtoms:
    return LabeledAtoms(corpus.atoms(), corpus.labels)


class TestLoss:
    def test_perfect_predictions_without_penalty(self):
        assert loss([1.0, 0.0], [1.0, 0.0], np.full((2, 3), 0.5), 0.0) == 0.0

    def test_worked_example(self):
        """MSE 0.125 plus lambda times mean W'."""
        value = loss([0.5, 0.0], [1.0, 0.0], np.array([[0.2, 0.6]]), 0.5)
        assert value == pytest.approx(0.125 + 0.5 * 0.4)

    def test_regularization_is_normalized(self):
        assert regularization(np.ones((4, 10)), 0.2) == pytest.approx(0.2)

    def test_empty_predictions_rejected(self):
        with pytest.raises(EmptyInputError):
            loss([], [], np.ones((1, 1)), 0.1)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ShapeMismatchError):
            loss([0.1, 0.2], [1.0], np.ones((1, 1)), 0.1)


class TestObjectiveGradient:
    def test_chunking_does_not_change_result(self, tiny_network):
        rng = np.random.default_rng(0)
        atoms, targets = rng.random((25, 3)), rng.integers(0, 2, 25).astype(float)
        whole_value, whole = objective_and_gradient(tiny_network, atoms, targets, 0.3)
        chunk_value, chunked = objective_and_gradient(
            tiny_network, atoms, targets, 0.3, chunk_size=4
        )
        assert chunk_value == pytest.approx(whole_value)
        np.testing.assert_allclose(chunked.dW, whole.dW, atol=1e-14)

    def test_loss_gradient_accepts_trace_list(self, tiny_network):
        rng = np.random.default_rng(1)
        atoms, targets = rng.random((6, 3)), rng.integers(0, 2, 6).astype(float)
        traces = [tiny_network.forward(row) for row in atoms]
        _, expected = objective_and_gradient(tiny_network, atoms, targets, 0.1)
        actual = loss_gradient(traces, targets, tiny_network, 0.1)
        np.testing.assert_allclose(actual.dW, expected.dW, atol=1e-14)

    def test_loss_gradient_target_mismatch(self, tiny_network):
        trace = tiny_network.forward_batch(np.zeros((3, 3)))
        with pytest.raises(ShapeMismatchError):
            loss_gradient(trace, [1.0, 0.0], tiny_network, 0.1)

    def test_evaluate_objective_matches(self, tiny_network):
        rng = np.random.default_rng(2)
        atoms, targets = rng.random((9, 3)), rng.integers(0, 2, 9).astype(float)
        value, _ = objective_and_gradient(tiny_network, atoms, targets, 0.2)
        assert evaluate_objective(tiny_network, atoms, targets, 0.2) == pytest.approx(value)


class TestAdam:
    def test_first_step_moves_by_learning_rate(self):
        """With bias correction the first step is lr * sign(g)."""
        cfg = TrainConfig(learning_rate=0.1)
        W = np.zeros((1, 2))
        updated, state = adam_step(
            AdamState.fresh(1, 2), Gradient(np.array([[2.0, -0.5]])), W, cfg
        )
        np.testing.assert_allclose(updated, [[-0.1, 0.1]], atol=1e-7)
        assert state.t == 1

    def test_constant_gradient_steps_stay_below_learning_rate(self):
        """Under a constant gradient no step moves a weight by more than lr."""
        cfg = TrainConfig(learning_rate=0.05)
        grad = Gradient(np.array([[3.0, -1e-3, 250.0]]))
        W = np.zeros((1, 3))
        state = AdamState.fresh(1, 3)
        for _ in range(200):
            updated, state = adam_step(state, grad, W, cfg)
            assert np.abs(updated - W).max() <= cfg.learning_rate * (1.0 + 1e-9)
            W = updated
        assert state.t == 200
        assert (np.sign(W) == -np.sign(grad.dW)).all()

    def test_inputs_not_modified(self):
        cfg = TrainConfig()
        W = np.ones((2, 2))
        state = AdamState.fresh(2, 2)
        adam_step(state, Gradient(np.ones((2, 2))), W, cfg)
        np.testing.assert_array_equal(W, np.ones((2, 2)))
        assert state.t == 0 and not state.m.any()

    def test_zero_gradient_leaves_weights(self):
        W = np.array([[0.3, -0.2]])
        updated, _ = adam_step(AdamState.fresh(1, 2), Gradient.zeros(1, 2), W, TrainConfig())
        np.testing.assert_array_equal(updated, W)

    def test_non_finite_gradient_rejected(self):
        with pytest.raises(TrainingException):
            adam_step(
                AdamState.fresh(1, 1),
                Gradient(np.array([[np.nan]])),
                np.zeros((1, 1)),
                TrainConfig(),
            )

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ShapeMismatchError):
            adam_step(AdamState.fresh(1, 2), Gradient.zeros(1, 3), np.zeros((1, 2)), TrainConfig())

    def test_state_validation(self):
        with pytest.raises(ValidationException):
            AdamState(m=np.zeros(2), v=-np.ones(2))


class TestLabeledAtoms:
    def test_rejects_non_binary_labels(self):
        with pytest.raises(ValidationException):
            LabeledAtoms(np.zeros((2, 3)), np.array([0.0, 0.5]))

    def test_rejects_empty(self):
        with pytest.raises(EmptyInputError):
            LabeledAtoms(np.zeros((0, 3)), np.zeros(0))


class TestTrainingService:
    def test_loss_decreases(self, synthetic_corpus):
        cfg = TrainConfig(k=4, epochs=60, learning_rate=0.05, lambda_=0.2)
        _, history = TrainingService(cfg).train(_dataset(synthetic_corpus))
        assert history.epochs == 60
        assert history.train_loss[-1] < history.train_loss[0]

    def test_same_seed_same_weights(self, synthetic_corpus):
        cfg = TrainConfig(epochs=5, seed=9)
        first, _ = train(_dataset(synthetic_corpus), cfg)
        second, _ = train(_dataset(synthetic_corpus), cfg)
        np.testing.assert_array_equal(first.weights, second.weights)

    def test_seed_override(self, synthetic_corpus):
        cfg = TrainConfig(epochs=3, seed=1)
        service = TrainingService(cfg)
        a, _ = service.train(_dataset(synthetic_corpus), seed=2)
        b, _ = train(_dataset(synthetic_corpus), cfg.model_copy(update={"seed": 2}))
        np.testing.assert_array_equal(a.weights, b.weights)

    def test_validation_loss_recorded(self, synthetic_corpus):
        data = _dataset(synthetic_corpus)
        _, history = TrainingService(TrainConfig(epochs=4)).train(data, validation=data)
        assert all(not math.isnan(v) for v in history.validation_loss)
        assert history.final_fuzzy_weights.shape == (4, len(SYNTHETIC_ATOMS))

    def test_validation_loss_nan_without_validation(self, synthetic_corpus):
        _, history = TrainingService(TrainConfig(epochs=2)).train(_dataset(synthetic_corpus))
        assert all(math.isnan(v) for v in history.validation_loss)

    def test_validation_atom_count_must_match(self, synthetic_corpus):
        data = _dataset(synthetic_corpus)
        other = LabeledAtoms(np.zeros((3, 2)), np.zeros(3))
        with pytest.raises(ShapeMismatchError):
            TrainingService(TrainConfig(epochs=1)).train(data, validation=other)

    def test_minibatch_training_is_deterministic(self, synthetic_corpus):
        cfg = TrainConfig(epochs=3, batch_size=128, seed=4)
        a, history = train(_dataset(synthetic_corpus), cfg)
        b, _ = train(_dataset(synthetic_corpus), cfg)
        np.testing.assert_array_equal(a.weights, b.weights)
        assert history.epochs == 3

    def test_minibatch_differs_from_full_batch(self, synthetic_corpus):
        full, _ = train(_dataset(synthetic_corpus), TrainConfig(epochs=3))
        mini, _ = train(_dataset(synthetic_corpus), TrainConfig(epochs=3, batch_size=100))
        assert not np.allclose(full.weights, mini.weights)

    def test_history_tracks_mean_weight(self, synthetic_corpus):
        net, history = train(_dataset(synthetic_corpus), TrainConfig(epochs=2))
        assert history.mean_fuzzy_weight[-1] == pytest.approx(float(net.fuzzify().mean()))

    def test_single_sample(self):
        net, history = train(
            LabeledAtoms(np.array([[1, 0]], dtype=np.uint8), np.array([1.0])),
            TrainConfig(k=1, epochs=5),
        )
        assert isinstance(net, RuleNetwork)
        assert history.epochs == 5


class TestRestarts:
    def test_restart_seeds_start_with_run_seed(self):
        seeds = restart_seeds(7, 4)
        assert seeds[0] == 7
        assert len(set(seeds)) == 4
        assert restart_seeds(7, 4) == seeds

    def test_single_restart_is_plain_run(self, synthetic_corpus):
        cfg = TrainConfig(epochs=5, seed=3)
        _, history = train(_dataset(synthetic_corpus), cfg)
        assert history.seed == 3
        assert history.restart_objectives == []

    def test_keeps_lowest_objective(self, synthetic_corpus):
        data = _dataset(synthetic_corpus)
        cfg = TrainConfig(epochs=20, seed=5, restarts=3)
        net, history = train(data, cfg)

        singles = []
        for seed in restart_seeds(5, 3):
            single, _ = train(data, cfg.model_copy(update={"seed": seed, "restarts": 1}))
            singles.append((evaluate_objective(single, data.atoms, data.labels, 0.2), seed, single))
        best_value, best_seed, best_net = min(singles, key=lambda item: item[0])

        assert history.seed == best_seed
        assert history.restart_objectives == pytest.approx([value for value, _, _ in singles])
        assert min(history.restart_objectives) == pytest.approx(best_value)
        np.testing.assert_array_equal(net.weights, best_net.weights)

    def test_restarts_scored_on_validation(self, synthetic_corpus):
        data = _dataset(synthetic_corpus)
        held_out = LabeledAtoms(data.atoms[:200], data.labels[:200])
        _, history = TrainingService(TrainConfig(epochs=5, restarts=2)).train(
            data, validation=held_out
        )
        assert len(history.restart_objectives) == 2
        assert history.validation_loss[-1] == pytest.approx(min(history.restart_objectives))

    def test_restarts_must_be_positive(self):
        with pytest.raises(ValueError):
            TrainConfig(restarts=0)


def _matches_planted(weights: np.ndarray, atoms) -> bool:
    """Each planted rule owns a row with its atoms >= 0.9 and every other atom <= 0.1."""
    index = {name: i for i, name in enumerate(SYNTHETIC_ATOMS)}
    for body in atoms:
        wanted = np.zeros(len(SYNTHETIC_ATOMS), dtype=bool)
        wanted[[index[name] for name in body]] = True
        if not any(
            (row[wanted] >= 0.9).all() and (row[~wanted] <= 0.1).all() for row in weights
        ):
            return False
    return bool((weights[:, index["COOKIE"]] <= 0.05).all())


@pytest.mark.slow
class TestSyntheticRecovery:
    """Planted-rule recovery over many corpus seeds."""

    PLANTED = (("HIGH",), ("RECENT", "GENRE"), ("RECENT", "CAST", "DIRECTOR"))

    def test_planted_rules_recovered_across_seeds(self):
        from fuzzyrec.domain.data.services.synthetic_generator import generate_synthetic
        from fuzzyrec.infrastructure.config.settings import Settings

        preset = Settings.synthetic_preset().train
        recovered = 0
        for seed in range(10):
            corpus = generate_synthetic(seed=seed, n_samples=50_000)
            net, _ = train(_dataset(corpus), preset.model_copy(update={"seed": seed}))
            recovered += _matches_planted(net.fuzzify(), self.PLANTED)
        assert recovered >= 9

    def test_sparsity_grows_with_lambda(self):
        from fuzzyrec.domain.data.services.synthetic_generator import generate_synthetic

        corpus = generate_synthetic(seed=0, n_samples=20_000, n_users=100, n_items=100)
        means = []
        for lambda_ in (0.01, 0.2, 1.0):
            _, history = train(_dataset(corpus), TrainConfig(epochs=150, lambda_=lambda_))
            means.append(history.mean_fuzzy_weight[-1])
        assert means[0] > means[1] > means[2]

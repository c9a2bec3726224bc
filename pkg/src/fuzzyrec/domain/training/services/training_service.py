"""
Training domain service - fits a rule network with Adam.
"""

import logging
import time
from typing import List, Optional, Tuple

import numpy as np

from fuzzyrec.domain.exceptions.exception import ShapeMismatchError, TrainingException
from fuzzyrec.domain.network.models.rule_network import Gradient, RuleNetwork
from fuzzyrec.domain.training.models.adam_state import AdamState
from fuzzyrec.domain.training.models.history import TrainHistory
from fuzzyrec.domain.training.models.labeled_atoms import LabeledAtoms
from fuzzyrec.domain.training.services.objective import (
    evaluate_objective,
    objective_and_gradient,
)
from fuzzyrec.domain.training.services.optimizer import adam_step
from fuzzyrec.infrastructure.config.settings import TrainConfig

logger = logging.getLogger(__name__)


class TrainingService:
    """Service for training rule networks."""

    def __init__(self, config: TrainConfig):
        """
        Initialize with a training configuration.

        Args:
            config: Rule count, learning rate, epochs, lambda, batching, seed
        """
        self.config = config

    def train(
        self,
        dataset: LabeledAtoms,
        validation: Optional[LabeledAtoms] = None,
        seed: Optional[int] = None,
    ) -> Tuple[RuleNetwork, TrainHistory]:
        """
        Train a fresh network on the dataset.

        Full-batch by default; with an integer batch_size the samples are
        reshuffled every epoch from a generator seeded by the run seed.
        The weights after the final epoch are returned.

        With restarts > 1 the network is trained once per seed from
        restart_seeds and the run with the lowest final objective is kept,
        scored on the validation set when one is given.

        Args:
            dataset: Training atoms and labels
            validation: Optional held-out set for the validation loss
            seed: Overrides the configured seed

        Returns:
            Trained network and its history

        Raises:
            ShapeMismatchError: If validation has a different atom count
            TrainingException: If the weights or gradients stop being finite
        """
        cfg = self.config
        run_seed = cfg.seed if seed is None else seed
        if validation is not None and validation.n != dataset.n:
            raise ShapeMismatchError(
                f"validation has {validation.n} atoms, training has {dataset.n}"
            )
        if cfg.restarts == 1:
            net, history = self._train_once(dataset, validation, run_seed)
            history.seed = run_seed
            return net, history

        scored = dataset if validation is None else validation
        best: Optional[Tuple[RuleNetwork, TrainHistory]] = None
        best_value = float("inf")
        objectives: List[float] = []
        for attempt, attempt_seed in enumerate(restart_seeds(run_seed, cfg.restarts)):
            net, history = self._train_once(dataset, validation, attempt_seed)
            value = evaluate_objective(
                net, scored.atoms, scored.labels, cfg.lambda_, cfg.chunk_size
            )
            objectives.append(value)
            logger.info(
                f"restart {attempt + 1}/{cfg.restarts} seed={attempt_seed} objective={value:.6f}"
            )
            if value < best_value:
                best, best_value = (net, history), value
                history.seed = attempt_seed

        assert best is not None
        net, history = best
        history.restart_objectives = objectives
        logger.info(f"Kept seed {history.seed} with objective {best_value:.6f}")
        return net, history

    def _train_once(
        self, dataset: LabeledAtoms, validation: Optional[LabeledAtoms], run_seed: int
    ) -> Tuple[RuleNetwork, TrainHistory]:
        cfg = self.config
        net = RuleNetwork.initialize(cfg.k, dataset.n, seed=run_seed, init_scale=cfg.init_scale)
        state = AdamState.fresh(cfg.k, dataset.n)
        shuffler = np.random.default_rng([run_seed, 1])
        history = TrainHistory()
        started = time.perf_counter()

        logger.info(
            f"Training k={cfg.k} n={dataset.n} on {len(dataset)} samples "
            f"(epochs={cfg.epochs}, lr={cfg.learning_rate}, lambda={cfg.lambda_}, "
            f"batch={cfg.batch_size}, seed={run_seed})"
        )
        for epoch in range(1, cfg.epochs + 1):
            if cfg.is_full_batch:
                train_loss, state = self._full_batch_epoch(net, state, dataset, epoch)
            else:
                train_loss, state = self._minibatch_epoch(net, state, dataset, shuffler, epoch)

            validation_loss = float("nan")
            if validation is not None:
                validation_loss = evaluate_objective(
                    net, validation.atoms, validation.labels, cfg.lambda_, cfg.chunk_size
                )
            history.record(train_loss, validation_loss, float(net.fuzzify().mean()))

            if epoch % cfg.log_every == 0 or epoch == cfg.epochs:
                logger.info(
                    f"epoch {epoch}/{cfg.epochs} loss={train_loss:.6f} "
                    f"val_loss={validation_loss:.6f} "
                    f"elapsed={time.perf_counter() - started:.1f}s"
                )

        history.final_fuzzy_weights = net.fuzzify()
        history.seconds = time.perf_counter() - started
        return net, history

    def _full_batch_epoch(
        self, net: RuleNetwork, state: AdamState, dataset: LabeledAtoms, epoch: int
    ) -> Tuple[float, AdamState]:
        cfg = self.config
        value, grad = objective_and_gradient(
            net, dataset.atoms, dataset.labels, cfg.lambda_, cfg.chunk_size
        )
        return value, self._apply(net, state, grad, epoch)

    def _minibatch_epoch(
        self,
        net: RuleNetwork,
        state: AdamState,
        dataset: LabeledAtoms,
        shuffler: np.random.Generator,
        epoch: int,
    ) -> Tuple[float, AdamState]:
        cfg = self.config
        n_samples = len(dataset)
        order = shuffler.permutation(n_samples) if cfg.shuffle else np.arange(n_samples)
        weighted_loss = 0.0
        for start in range(0, n_samples, int(cfg.batch_size)):
            batch = order[start : start + int(cfg.batch_size)]
            value, grad = objective_and_gradient(
                net, dataset.atoms[batch], dataset.labels[batch], cfg.lambda_, cfg.chunk_size
            )
            state = self._apply(net, state, grad, epoch)
            weighted_loss += value * batch.size
        return weighted_loss / n_samples, state

    def _apply(
        self, net: RuleNetwork, state: AdamState, grad: Gradient, epoch: int
    ) -> AdamState:
        try:
            updated, new_state = adam_step(state, grad, np.array(net.weights), self.config)
        except TrainingException as e:
            raise TrainingException(str(e), epoch=epoch) from e
        if not np.isfinite(updated).all():
            raise TrainingException("weights became non-finite", epoch=epoch)
        net.set_weights(updated)
        return new_state


def train(
    dataset: LabeledAtoms,
    cfg: TrainConfig,
    validation: Optional[LabeledAtoms] = None,
) -> Tuple[RuleNetwork, TrainHistory]:
    """Train a network with the given configuration."""
    return TrainingService(cfg).train(dataset, validation)


def restart_seeds(run_seed: int, restarts: int) -> List[int]:
    """Seeds for each restart; the first is the run seed itself."""
    children = np.random.SeedSequence(run_seed).spawn(max(restarts - 1, 0))
    return [run_seed] + [int(child.generate_state(1)[0]) for child in children]

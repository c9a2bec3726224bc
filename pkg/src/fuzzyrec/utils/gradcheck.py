"""
Finite-difference check of the hand-derived objective gradient.

Each trial draws a small network (k in 1..4, n in 1..10) with W uniform on
[-3, 3], fuzzy atoms in (0.05, 0.95), binary targets and a regularization
strength, then compares every analytic partial derivative with a five-point
central difference.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from fuzzyrec.domain.network.models.rule_network import RuleNetwork
from fuzzyrec.domain.training.services.objective import loss, objective_and_gradient

logger = logging.getLogger(__name__)

WEIGHT_RANGE = (-3.0, 3.0)
ATOM_RANGE = (0.05, 0.95)
MAX_RULES = 4
MAX_ATOMS = 10

# Analytic gradients below this are compared in absolute terms, against the same bound.
ABSOLUTE_FLOOR = 1e-8


@dataclass
class GradcheckResult:
    """Outcome of a gradient check.

    Attributes:
        trials: Number of random instances
        tolerance: Allowed relative error
        max_relative_error: Worst relative error over entries with |g| >= ABSOLUTE_FLOOR
        max_absolute_error: Worst absolute error over entries with |g| < ABSOLUTE_FLOOR
        failures: (trial, rule, atom, error) for entries outside their bound
    """

    trials: int
    tolerance: float
    max_relative_error: float = 0.0
    max_absolute_error: float = 0.0
    failures: List[Tuple[int, int, int, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _objective(W: np.ndarray, atoms: np.ndarray, targets: np.ndarray, lambda_: float) -> float:
    net = RuleNetwork(W)
    return loss(net.predict_batch(atoms), targets, net.fuzzify(), lambda_)


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / abs(analytic)


def gradient_error(analytic: float, numeric: float) -> Tuple[float, bool]:
    """Error of one entry and whether it was measured in absolute terms."""
    if abs(analytic) < ABSOLUTE_FLOOR:
        return abs(analytic - numeric), True
    return relative_error(analytic, numeric), False


def numeric_partial(
    W: np.ndarray,
    i: int,
    j: int,
    atoms: np.ndarray,
    targets: np.ndarray,
    lambda_: float,
    h: float,
) -> float:
    """Five-point central difference of the objective in W[i, j]."""
    values = []
    for step in (2.0, 1.0, -1.0, -2.0):
        shifted = W.copy()
        shifted[i, j] += step * h
        values.append(_objective(shifted, atoms, targets, lambda_))
    far_plus, plus, minus, far_minus = values
    return (-far_plus + 8.0 * plus - 8.0 * minus + far_minus) / (12.0 * h)


def run_gradcheck(
    trials: int = 100, tolerance: float = 1e-5, seed: int = 0, h: float = 1e-3
) -> GradcheckResult:
    """
    Compare analytic and finite-difference gradients of the full objective.

    An entry passes when its relative error is below `tolerance`, or, when the
    analytic partial is smaller than ABSOLUTE_FLOOR in magnitude, when the
    absolute error is below ABSOLUTE_FLOOR.

    Args:
        trials: Random instances to check
        tolerance: Maximum relative error
        seed: Generator seed
        h: Finite-difference step

    Returns:
        Result with the worst errors and every failing entry
    """
    rng = np.random.default_rng(seed)
    result = GradcheckResult(trials=trials, tolerance=tolerance)
    for trial in range(trials):
        k = int(rng.integers(1, MAX_RULES + 1))
        n = int(rng.integers(1, MAX_ATOMS + 1))
        n_samples = int(rng.integers(1, 9))
        W = rng.uniform(*WEIGHT_RANGE, size=(k, n))
        atoms = rng.uniform(*ATOM_RANGE, size=(n_samples, n))
        targets = rng.integers(0, 2, size=n_samples).astype(np.float64)
        lambda_ = float(rng.uniform(0.0, 1.0))

        _, grad = objective_and_gradient(RuleNetwork(W), atoms, targets, lambda_)
        for i in range(k):
            for j in range(n):
                numeric = numeric_partial(W, i, j, atoms, targets, lambda_, h)
                error, absolute = gradient_error(float(grad.dW[i, j]), numeric)
                if absolute:
                    result.max_absolute_error = max(result.max_absolute_error, error)
                    failed = error >= ABSOLUTE_FLOOR
                else:
                    result.max_relative_error = max(result.max_relative_error, error)
                    failed = error >= tolerance
                if failed:
                    result.failures.append((trial, i, j, error))

    logger.info(
        f"gradcheck: {trials} trials, max relative error {result.max_relative_error:.3e}, "
        f"max absolute error {result.max_absolute_error:.3e} "
        f"(tolerance {tolerance:g}, seed {seed})"
    )
    return result

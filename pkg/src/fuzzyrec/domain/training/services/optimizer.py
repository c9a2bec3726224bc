"""Adam with bias correction."""

from typing import Protocol, Tuple

import numpy as np

from fuzzyrec.domain.exceptions.exception import ShapeMismatchError, TrainingException
from fuzzyrec.domain.network.models.rule_network import Gradient
from fuzzyrec.domain.training.models.adam_state import AdamState


class AdamParameters(Protocol):
    """The optimizer fields of a training configuration."""

    learning_rate: float
    adam_beta1: float
    adam_beta2: float
    adam_eps: float


def adam_step(
    state: AdamState, grad: Gradient, W: np.ndarray, cfg: AdamParameters
) -> Tuple[np.ndarray, AdamState]:
    """
    One Adam update.

        m <- b1 m + (1 - b1) g
        v <- b2 v + (1 - b2) g^2
        W <- W - lr * m_hat / (sqrt(v_hat) + eps)

    The inputs are not modified.

    Args:
        state: Moments and step counter before the update
        grad: Gradient dL/dW
        W: Current raw weights
        cfg: Learning rate and Adam constants

    Returns:
        Updated weights and the new state

    Raises:
        ShapeMismatchError: If shapes disagree
        TrainingException: If the gradient is not finite
    """
    g = grad.dW
    if g.shape != W.shape or state.m.shape != W.shape:
        raise ShapeMismatchError(
            f"adam shapes disagree: W {W.shape}, grad {g.shape}, state {state.m.shape}"
        )
    if not grad.is_finite():
        bad = int(np.count_nonzero(~np.isfinite(g)))
        raise TrainingException(f"non-finite gradient ({bad} entries) at step {state.t + 1}")

    beta1, beta2 = cfg.adam_beta1, cfg.adam_beta2
    t = state.t + 1
    m = beta1 * state.m + (1.0 - beta1) * g
    v = beta2 * state.v + (1.0 - beta2) * (g * g)
    m_hat = m / (1.0 - beta1**t)
    v_hat = v / (1.0 - beta2**t)
    updated = W - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)
    return updated, AdamState(m=m, v=v, t=t)

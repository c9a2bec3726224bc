"""Training services."""

from .objective import (
    evaluate_objective,
    loss,
    loss_gradient,
    objective_and_gradient,
    regularization,
)
from .optimizer import adam_step
from .training_service import TrainingService, restart_seeds, train

__all__ = [
    "loss",
    "loss_gradient",
    "regularization",
    "objective_and_gradient",
    "evaluate_objective",
    "adam_step",
    "TrainingService",
    "restart_seeds",
    "train",
]

"""Training models."""

from .adam_state import AdamState
from .history import TrainHistory
from .labeled_atoms import LabeledAtoms

__all__ = ["AdamState", "TrainHistory", "LabeledAtoms"]

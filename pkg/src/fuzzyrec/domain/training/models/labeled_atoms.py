"""Labeled atom matrix - the training input of the rule network."""

from dataclasses import dataclass

import numpy as np

from fuzzyrec.domain.exceptions.exception import (
    EmptyInputError,
    ShapeMismatchError,
    ValidationException,
)


@dataclass
class LabeledAtoms:
    """N atom vectors (rows) with binary targets.

    Attributes:
        atoms: (N, n) matrix; crisp atoms may be stored as uint8
        labels: (N,) targets in {0, 1}
    """

    atoms: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.atoms = np.asarray(self.atoms)
        self.labels = np.asarray(self.labels, dtype=np.float64)
        if self.atoms.ndim != 2:
            raise ShapeMismatchError(f"atoms must be an (N, n) matrix, got {self.atoms.shape}")
        if self.atoms.shape[0] == 0:
            raise EmptyInputError("dataset has no samples")
        if self.labels.shape != (self.atoms.shape[0],):
            raise ShapeMismatchError(
                f"{self.atoms.shape[0]} atom rows but labels of shape {self.labels.shape}"
            )
        if not np.isin(self.labels, (0.0, 1.0)).all():
            raise ValidationException("labels must be 0 or 1")

    def __len__(self) -> int:
        return int(self.atoms.shape[0])

    @property
    def n(self) -> int:
        return int(self.atoms.shape[1])

"""Adam optimizer state."""

from dataclasses import dataclass

import numpy as np

from fuzzyrec.domain.exceptions.exception import ValidationException


@dataclass
class AdamState:
    """First/second moment estimates and step counter, shaped like W.

    Attributes:
        m: First moment (exponential average of gradients)
        v: Second moment (exponential average of squared gradients)
        t: Number of steps taken
    """

    m: np.ndarray
    v: np.ndarray
    t: int = 0

    def __post_init__(self):
        if self.m.shape != self.v.shape:
            raise ValidationException(f"moment shapes differ: {self.m.shape} vs {self.v.shape}")
        if self.t < 0:
            raise ValidationException("step counter cannot be negative")
        if (self.v < 0).any():
            raise ValidationException("second moment must be non-negative")

    @classmethod
    def fresh(cls, k: int, n: int) -> "AdamState":
        return cls(m=np.zeros((k, n)), v=np.zeros((k, n)), t=0)

"""Training history data model."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np


@dataclass
class TrainHistory:
    """Per-epoch record of a training run.

    Attributes:
        train_loss: Objective on the training set, one value per epoch
        validation_loss: Objective on the validation set (NaN when none given)
        mean_fuzzy_weight: Mean of W' after each epoch
        final_fuzzy_weights: W' after the last epoch
        seconds: Wall time of the run
        seed: Seed of the kept run
        restart_objectives: Final objective of every restart, in restart order
    """

    train_loss: List[float] = field(default_factory=list)
    validation_loss: List[float] = field(default_factory=list)
    mean_fuzzy_weight: List[float] = field(default_factory=list)
    final_fuzzy_weights: Optional[np.ndarray] = None
    seconds: float = 0.0
    seed: Optional[int] = None
    restart_objectives: List[float] = field(default_factory=list)

    @property
    def epochs(self) -> int:
        return len(self.train_loss)

    def record(self, train_loss: float, validation_loss: float, mean_weight: float) -> None:
        self.train_loss.append(float(train_loss))
        self.validation_loss.append(float(validation_loss))
        self.mean_fuzzy_weight.append(float(mean_weight))

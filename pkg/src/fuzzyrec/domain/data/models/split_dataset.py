"""Train/validation/test split data model."""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import pandas as pd

from fuzzyrec.domain.exceptions.exception import ValidationException


class SplitKind(Enum):
    """How the rows were assigned to partitions."""

    TEMPORAL = "temporal"
    RANDOM = "random"


@dataclass(frozen=True)
class SplitDataset:
    """Three disjoint partitions of one frame.

    Partitions keep the original index labels of the source frame so
    disjointness can be checked on the index.

    Attributes:
        train: Training rows
        validation: Validation rows
        test: Test rows
        split_kind: Temporal or random
    """

    train: pd.DataFrame
    validation: pd.DataFrame
    test: pd.DataFrame
    split_kind: SplitKind

    def __post_init__(self):
        """Validate disjointness."""
        seen = self.train.index.append([self.validation.index, self.test.index])
        if seen.has_duplicates:
            raise ValidationException("split partitions overlap")

    @property
    def sizes(self) -> Tuple[int, int, int]:
        return len(self.train), len(self.validation), len(self.test)

    def __len__(self) -> int:
        return sum(self.sizes)

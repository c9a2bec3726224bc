from abc import abstractmethod
from typing import Protocol

import numpy as np

from fuzzyrec.domain.evaluation.models.report import CandidateSet


class IScorer(Protocol):
    """Interface for anything that scores user-item candidates."""

    @abstractmethod
    def score(self, candidates: CandidateSet) -> np.ndarray:
        """Score every candidate row.

        Args:
            candidates: Pairs to score, with atoms when the scorer needs them

        Returns:
            (N,) scores; higher ranks first
        """
        ...

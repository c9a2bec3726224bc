"""Scores candidates with a trained rule network."""

from typing import Optional

import numpy as np

from fuzzyrec.domain.evaluation.models.report import CandidateSet
from fuzzyrec.domain.exceptions.exception import ValidationException
from fuzzyrec.domain.network.models.rule_network import RuleNetwork


class NetworkScorer:
    """Uses the prediction y in [0, 1] as the confidence score."""

    def __init__(self, net: RuleNetwork, chunk_size: Optional[int] = 16384):
        self.net = net
        self.chunk_size = chunk_size

    def score(self, candidates: CandidateSet) -> np.ndarray:
        if candidates.atoms is None:
            raise ValidationException("network scoring needs the candidates' atom matrix")
        return self.net.predict_batch(candidates.atoms, chunk_size=self.chunk_size)

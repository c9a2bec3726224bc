"""
Bias-only rating predictor: r_hat(u, i) = mu + b_u + b_i.

Biases are fitted by alternating regularized means: every epoch first
updates the item biases against the current user biases, then the user
biases against the new item biases.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd

from fuzzyrec.domain.evaluation.models.report import CandidateSet
from fuzzyrec.domain.exceptions.exception import EmptyInputError, ValidationException

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BiasModel:
    """Fitted biases.

    Attributes:
        mu: Global mean rating
        user_bias: b_u per user id
        item_bias: b_i per item id
        reg_u: User regularization
        reg_i: Item regularization
        rating_scale: Predictions are clipped to this closed range
    """

    mu: float
    user_bias: pd.Series
    item_bias: pd.Series
    reg_u: float = 15.0
    reg_i: float = 10.0
    rating_scale: Tuple[float, float] = (1.0, 5.0)

    def predict(self, user_id: int, item_id: int) -> float:
        return predict_bias(self, user_id, item_id)

    def predict_many(self, user_ids: np.ndarray, item_ids: np.ndarray) -> np.ndarray:
        """Vectorized predict_bias; unknown ids get a zero bias."""
        b_u = self.user_bias.reindex(np.asarray(user_ids)).fillna(0.0).to_numpy()
        b_i = self.item_bias.reindex(np.asarray(item_ids)).fillna(0.0).to_numpy()
        low, high = self.rating_scale
        return np.clip(self.mu + b_u + b_i, low, high)


def fit_bias(
    train: pd.DataFrame,
    epochs: int = 20,
    reg_i: float = 10.0,
    reg_u: float = 15.0,
    rating_scale: Tuple[float, float] = (1.0, 5.0),
) -> BiasModel:
    """
    Fit mu, b_u and b_i by alternating means.

        b_i = sum(r - mu - b_u) / (reg_i + |R(i)|)
        b_u = sum(r - mu - b_i) / (reg_u + |R(u)|)

    Records are put in a canonical order first, so the fit does not depend
    on the order of the training rows.

    Args:
        train: Frame with user_id, item_id, rating
        epochs: Alternation rounds
        reg_i: Item regularization
        reg_u: User regularization
        rating_scale: Clipping range of predictions

    Raises:
        EmptyInputError: If train has no rows
    """
    if len(train) == 0:
        raise EmptyInputError("bias model needs at least one training rating")
    if epochs < 1:
        raise ValidationException(f"epochs must be positive, got {epochs}")
    ordered = train.loc[:, ["user_id", "item_id", "rating"]].sort_values(
        ["user_id", "item_id", "rating"], kind="mergesort"
    )
    user_codes, users = pd.factorize(ordered["user_id"], sort=True)
    item_codes, items = pd.factorize(ordered["item_id"], sort=True)
    ratings = ordered["rating"].to_numpy(dtype=np.float64)

    mu = float(ratings.mean())
    user_counts = np.bincount(user_codes, minlength=len(users))
    item_counts = np.bincount(item_codes, minlength=len(items))
    b_u = np.zeros(len(users))
    b_i = np.zeros(len(items))
    for _ in range(epochs):
        residual = ratings - mu - b_u[user_codes]
        b_i = np.bincount(item_codes, weights=residual, minlength=len(items)) / (
            reg_i + item_counts
        )
        residual = ratings - mu - b_i[item_codes]
        b_u = np.bincount(user_codes, weights=residual, minlength=len(users)) / (
            reg_u + user_counts
        )

    logger.info(f"Fitted bias model: mu={mu:.4f}, {len(users)} users, {len(items)} items")
    return BiasModel(
        mu=mu,
        user_bias=pd.Series(b_u, index=np.asarray(users)),
        item_bias=pd.Series(b_i, index=np.asarray(items)),
        reg_u=reg_u,
        reg_i=reg_i,
        rating_scale=rating_scale,
    )


def predict_bias(model: BiasModel, user_id: int, item_id: int) -> float:
    """mu + b_u + b_i with zero bias for unknown ids, clipped to the rating scale."""
    b_u = float(model.user_bias.get(user_id, 0.0))
    b_i = float(model.item_bias.get(item_id, 0.0))
    low, high = model.rating_scale
    return float(min(max(model.mu + b_u + b_i, low), high))


class BiasScorer:
    """Scores candidates with the predicted rating."""

    def __init__(self, model: BiasModel):
        self.model = model

    def score(self, candidates: CandidateSet) -> np.ndarray:
        return self.model.predict_many(candidates.user_ids, candidates.item_ids)

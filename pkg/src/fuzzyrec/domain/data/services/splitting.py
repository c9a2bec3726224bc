"""Temporal and random train/validation/test splits."""

import math
from typing import Sequence, Tuple

import numpy as np
import pandas as pd

from fuzzyrec.domain.data.models.split_dataset import SplitDataset, SplitKind
from fuzzyrec.domain.exceptions.exception import EmptyInputError, ValidationException

DEFAULT_RATIOS = (0.7, 0.1, 0.2)


def split_sizes(n: int, ratios: Sequence[float] = DEFAULT_RATIOS) -> Tuple[int, int, int]:
    """floor(r_train N), floor(r_val N), remainder."""
    if len(ratios) != 3 or any(r <= 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ValidationException(f"ratios must be three positive numbers summing to 1: {ratios}")
    n_train = math.floor(ratios[0] * n)
    n_validation = math.floor(ratios[1] * n)
    return n_train, n_validation, n - n_train - n_validation


def _cut(frame: pd.DataFrame, ratios: Sequence[float], kind: SplitKind) -> SplitDataset:
    n_train, n_validation, _ = split_sizes(len(frame), ratios)
    return SplitDataset(
        train=frame.iloc[:n_train],
        validation=frame.iloc[n_train : n_train + n_validation],
        test=frame.iloc[n_train + n_validation :],
        split_kind=kind,
    )


def temporal_split(
    interactions: pd.DataFrame, ratios: Sequence[float] = DEFAULT_RATIOS
) -> SplitDataset:
    """
    Sort by (timestamp, user_id, item_id) and cut by ratio.

    Later partitions never hold an interaction older than an earlier one,
    so unseen users and items appear in validation and test.

    Raises:
        EmptyInputError: If there are no interactions
    """
    if len(interactions) == 0:
        raise EmptyInputError("temporal_split needs at least one interaction")
    ordered = interactions.sort_values(
        ["timestamp", "user_id", "item_id"], kind="mergesort"
    )
    return _cut(ordered, ratios, SplitKind.TEMPORAL)


def random_split(
    samples: pd.DataFrame, ratios: Sequence[float] = DEFAULT_RATIOS, seed: int = 0
) -> SplitDataset:
    """
    Seeded permutation, then cut by ratio.

    Raises:
        EmptyInputError: If there are no samples
    """
    if len(samples) == 0:
        raise EmptyInputError("random_split needs at least one sample")
    order = np.random.default_rng(seed).permutation(len(samples))
    return _cut(samples.iloc[order], ratios, SplitKind.RANDOM)

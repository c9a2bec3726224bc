"""Data models."""

from .interaction import INTERACTION_COLUMNS, RATING_SCALE, Interaction
from .movielens import MOVIE_COLUMNS, USER_COLUMNS, MovieLensData
from .split_dataset import SplitDataset, SplitKind
from .synthetic import (
    SYNTHETIC_ATOMS,
    SYNTHETIC_COLUMNS,
    SyntheticCorpus,
    SyntheticSample,
    ground_truth,
    rules_fired,
)

__all__ = [
    "Interaction",
    "INTERACTION_COLUMNS",
    "RATING_SCALE",
    "MovieLensData",
    "USER_COLUMNS",
    "MOVIE_COLUMNS",
    "SplitDataset",
    "SplitKind",
    "SyntheticCorpus",
    "SyntheticSample",
    "SYNTHETIC_ATOMS",
    "SYNTHETIC_COLUMNS",
    "ground_truth",
    "rules_fired",
]

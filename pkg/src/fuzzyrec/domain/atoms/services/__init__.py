"""Atom services."""

from .atomizer import (
    Atomizer,
    MovieProfile,
    UserProfile,
    atomize,
    build_catalog,
    decade_key,
    synthetic_atoms,
)
from .statistics import (
    InteractionStats,
    candidate_thresholds,
    compute_stats,
    median_thresholds,
    percentile,
)
from .threshold_selection import (
    ThresholdSelection,
    choose_thresholds,
    select_threshold_atoms,
    select_thresholds,
)

__all__ = [
    "Atomizer",
    "UserProfile",
    "MovieProfile",
    "atomize",
    "build_catalog",
    "decade_key",
    "synthetic_atoms",
    "InteractionStats",
    "compute_stats",
    "percentile",
    "candidate_thresholds",
    "median_thresholds",
    "ThresholdSelection",
    "choose_thresholds",
    "select_thresholds",
    "select_threshold_atoms",
]

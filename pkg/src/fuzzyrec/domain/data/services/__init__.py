"""Data services."""

from .movielens_parser import GENRES, binarize, binarize_ratings, parse_movielens
from .splitting import random_split, split_sizes, temporal_split
from .synthetic_generator import generate_synthetic, read_synthetic_csv, write_synthetic_csv

__all__ = [
    "GENRES",
    "parse_movielens",
    "binarize",
    "binarize_ratings",
    "temporal_split",
    "random_split",
    "split_sizes",
    "generate_synthetic",
    "write_synthetic_csv",
    "read_synthetic_csv",
]

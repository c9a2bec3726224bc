"""
MovieLens 1M parser.

All three files use the two-character separator `::`. Lines are split as
bytes so a broken title encoding never hides a structural error; only the
title text is decoded lossily.
"""

import logging
import re
from pathlib import Path
from typing import Callable, List, Sequence, Tuple, TypeVar, Union

import numpy as np
import pandas as pd

from fuzzyrec.domain.data.models.interaction import INTERACTION_COLUMNS, Interaction
from fuzzyrec.domain.data.models.movielens import MOVIE_COLUMNS, USER_COLUMNS, MovieLensData
from fuzzyrec.domain.exceptions.exception import (
    DataException,
    MalformedLineError,
    ValidationException,
)

logger = logging.getLogger(__name__)

SEPARATOR = b"::"

GENRES = (
    "Action",
    "Adventure",
    "Animation",
    "Children's",
    "Comedy",
    "Crime",
    "Documentary",
    "Drama",
    "Fantasy",
    "Film-Noir",
    "Horror",
    "Musical",
    "Mystery",
    "Romance",
    "Sci-Fi",
    "Thriller",
    "War",
    "Western",
)

_YEAR = re.compile(r"\((\d{4})\)\s*$")

T = TypeVar("T")
PathLike = Union[str, Path]


def parse_rating_line(line: bytes) -> Interaction:
    """
    Parse `UserID::MovieID::Rating::Timestamp`.

    Raises:
        ValueError: If the field count or a field value is wrong
    """
    fields = line.rstrip(b"\r\n").split(SEPARATOR)
    if len(fields) != 4:
        raise ValueError(f"expected 4 fields, found {len(fields)}")
    return Interaction(
        user_id=int(fields[0]),
        item_id=int(fields[1]),
        rating=float(fields[2]),
        timestamp=int(fields[3]),
    )


def parse_user_line(line: bytes) -> Tuple[int, str, int, int, str]:
    """Parse `UserID::Gender::Age::Occupation::Zip-code`."""
    fields = line.rstrip(b"\r\n").split(SEPARATOR)
    if len(fields) != 5:
        raise ValueError(f"expected 5 fields, found {len(fields)}")
    gender = fields[1].decode("ascii")
    if gender not in ("F", "M"):
        raise ValueError(f"unknown gender {gender!r}")
    return int(fields[0]), gender, int(fields[2]), int(fields[3]), fields[4].decode("ascii")


def parse_movie_line(line: bytes) -> Tuple[int, str, float, Tuple[str, ...]]:
    """Parse `MovieID::Title (Year)::Genre1|Genre2`; year is NaN when absent."""
    fields = line.rstrip(b"\r\n").split(SEPARATOR)
    if len(fields) != 3:
        raise ValueError(f"expected 3 fields, found {len(fields)}")
    title = fields[1].decode("utf-8", errors="replace")
    match = _YEAR.search(title)
    year = float(match.group(1)) if match else float("nan")
    genres = tuple(g for g in fields[2].decode("ascii").strip().split("|") if g)
    unknown = [g for g in genres if g not in GENRES]
    if unknown:
        logger.warning(f"Movie {int(fields[0])} has unknown genres {unknown}; ignored")
        genres = tuple(g for g in genres if g in GENRES)
    return int(fields[0]), title, year, genres


def _read_lines(path: PathLike, parse: Callable[[bytes], T]) -> List[T]:
    path = Path(path)
    if not path.is_file():
        raise DataException(f"Dataset file not found: {path}")
    records: List[T] = []
    with open(path, "rb") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                records.append(parse(line))
            except (ValueError, UnicodeDecodeError, ValidationException) as e:
                raise MalformedLineError(str(e), str(path), line_number) from e
    return records


def read_ratings(path: PathLike) -> pd.DataFrame:
    """Read ratings.dat into a user_id, item_id, rating, timestamp frame."""
    records = _read_lines(path, parse_rating_line)
    if not records:
        return pd.DataFrame(columns=list(INTERACTION_COLUMNS))
    return pd.DataFrame(
        {
            "user_id": np.fromiter((r.user_id for r in records), dtype=np.int64),
            "item_id": np.fromiter((r.item_id for r in records), dtype=np.int64),
            "rating": np.fromiter((r.rating for r in records), dtype=np.float64),
            "timestamp": np.fromiter((r.timestamp for r in records), dtype=np.int64),
        }
    )


def read_users(path: PathLike) -> pd.DataFrame:
    return pd.DataFrame(_read_lines(path, parse_user_line), columns=list(USER_COLUMNS))


def read_movies(path: PathLike) -> pd.DataFrame:
    return pd.DataFrame(_read_lines(path, parse_movie_line), columns=list(MOVIE_COLUMNS))


def parse_movielens(
    ratings_path: PathLike, users_path: PathLike, movies_path: PathLike
) -> MovieLensData:
    """
    Read the three MovieLens 1M files.

    Args:
        ratings_path: ratings.dat
        users_path: users.dat
        movies_path: movies.dat

    Returns:
        Parsed tables

    Raises:
        DataException: If a file is missing
        MalformedLineError: On the first line that cannot be parsed
    """
    data = MovieLensData(
        ratings=read_ratings(ratings_path),
        users=read_users(users_path),
        movies=read_movies(movies_path),
    )
    n_users, n_movies, n_ratings = data.counts
    logger.info(f"Parsed MovieLens: {n_users} users, {n_movies} movies, {n_ratings} ratings")
    return data


def binarize(rating: float, threshold: float = 4.0) -> int:
    """1 iff rating >= threshold."""
    return int(rating >= threshold)


def binarize_ratings(ratings: Sequence[float], threshold: float = 4.0) -> np.ndarray:
    """Vectorized binarize."""
    return (np.asarray(ratings, dtype=np.float64) >= threshold).astype(np.uint8)

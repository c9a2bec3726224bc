"""Parsed MovieLens 1M tables."""

from dataclasses import dataclass
from typing import Tuple

import pandas as pd

USER_COLUMNS = ("user_id", "gender", "age", "occupation", "zip_code")
MOVIE_COLUMNS = ("item_id", "title", "year", "genres")


@dataclass(frozen=True)
class MovieLensData:
    """Ratings plus user and movie metadata.

    Attributes:
        ratings: user_id, item_id, rating, timestamp
        users: user_id, gender, age, occupation, zip_code
        movies: item_id, title, year (nullable), genres (tuple of names)
    """

    ratings: pd.DataFrame
    users: pd.DataFrame
    movies: pd.DataFrame

    @property
    def counts(self) -> Tuple[int, int, int]:
        """(users, movies, ratings)."""
        return len(self.users), len(self.movies), len(self.ratings)

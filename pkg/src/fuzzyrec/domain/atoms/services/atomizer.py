"""
Atom catalogs and atom vectors.

Every atom is crisp (0 or 1). Stat-threshold atoms compare a training
statistic against their threshold, imputing the fallback statistic for
users and items that have no training ratings.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

from fuzzyrec.domain.atoms.models.catalog import AtomCatalog, AtomDef, AtomKind, format_threshold
from fuzzyrec.domain.atoms.services.statistics import (
    DEFAULT_PERCENTILES,
    ITEM_MEAN_RATING,
    ITEM_RATING_COUNT,
    STAT_SOURCES,
    USER_MEAN_RATING,
    InteractionStats,
    candidate_thresholds,
)
from fuzzyrec.domain.data.models.synthetic import SYNTHETIC_ATOMS
from fuzzyrec.domain.data.services.movielens_parser import GENRES
from fuzzyrec.domain.exceptions.exception import ConfigurationException, ValidationException

logger = logging.getLogger(__name__)

SYNTHETIC = "synthetic"
MOVIELENS = "movielens"

GENDERS = {"F": "GENDER FEMALE", "M": "GENDER MALE"}

AGE_BRACKETS = {
    1: "AGE UNDER 18",
    18: "AGE 18-24",
    25: "AGE 25-34",
    35: "AGE 35-44",
    45: "AGE 45-49",
    50: "AGE 50-55",
    56: "AGE 56+",
}

OCCUPATIONS = (
    "OTHER",
    "ACADEMIC/EDUCATOR",
    "ARTIST",
    "CLERICAL/ADMIN",
    "COLLEGE/GRAD STUDENT",
    "CUSTOMER SERVICE",
    "DOCTOR/HEALTH CARE",
    "EXECUTIVE/MANAGERIAL",
    "FARMER",
    "HOMEMAKER",
    "K-12 STUDENT",
    "LAWYER",
    "PROGRAMMER",
    "RETIRED",
    "SALES/MARKETING",
    "SCIENTIST",
    "SELF-EMPLOYED",
    "TECHNICIAN/ENGINEER",
    "TRADESMAN/CRAFTSMAN",
    "UNEMPLOYED",
    "WRITER",
)

# (key, display, first year, last year); "unknown" matches a missing year.
DECADES = (
    ("pre1930", "RELEASED BEFORE 1930", -math.inf, 1929),
    ("1930s", "RELEASED 1930S", 1930, 1939),
    ("1940s", "RELEASED 1940S", 1940, 1949),
    ("1950s", "RELEASED 1950S", 1950, 1959),
    ("1960s", "RELEASED 1960S", 1960, 1969),
    ("1970s", "RELEASED 1970S", 1970, 1979),
    ("1980s", "RELEASED 1980S", 1980, 1989),
    ("1990-1994", "RELEASED 1990-1994", 1990, 1994),
    ("1995-1999", "RELEASED 1995-1999", 1995, 1999),
    ("2000s", "RELEASED 2000 OR LATER", 2000, math.inf),
    ("unknown", "RELEASE YEAR UNKNOWN", None, None),
)

STAT_ATOMS = {
    ITEM_MEAN_RATING: ("HIGH AVG MOVIE RATING", AtomKind.ITEM_STAT_THRESHOLD),
    USER_MEAN_RATING: ("HIGH AVG RATING PER USER", AtomKind.USER_STAT_THRESHOLD),
    ITEM_RATING_COUNT: ("MOVIE RATED OFTEN", AtomKind.ITEM_STAT_THRESHOLD),
}


@dataclass(frozen=True)
class UserProfile:
    """Demographics of one user; fields are None when unknown."""

    user_id: int
    gender: Optional[str] = None
    age: Optional[int] = None
    occupation: Optional[int] = None


@dataclass(frozen=True)
class MovieProfile:
    """Metadata of one movie."""

    item_id: int
    genres: FrozenSet[str] = field(default_factory=frozenset)
    year: Optional[int] = None


def decade_key(year: Optional[float]) -> str:
    """Release-decade bin of a year."""
    if year is None or (isinstance(year, float) and math.isnan(year)):
        return "unknown"
    for key, _, first, last in DECADES[:-1]:
        if first <= year <= last:
            return key
    return "unknown"


def stat_atom(source: str, threshold: float) -> AtomDef:
    label, kind = STAT_ATOMS[source]
    return AtomDef(
        name=f"{label} ({format_threshold(threshold)}+)",
        kind=kind,
        source=source,
        threshold=float(threshold),
    )


def _movielens_base_atoms() -> List[AtomDef]:
    atoms = [
        AtomDef(name, AtomKind.USER_INDICATOR, f"gender:{code}") for code, name in GENDERS.items()
    ]
    atoms += [
        AtomDef(name, AtomKind.USER_INDICATOR, f"age:{code}") for code, name in AGE_BRACKETS.items()
    ]
    atoms += [
        AtomDef(f"OCCUPATION {name}", AtomKind.USER_INDICATOR, f"occupation:{code}")
        for code, name in enumerate(OCCUPATIONS)
    ]
    atoms += [
        AtomDef(f"GENRE {genre.upper()}", AtomKind.ITEM_INDICATOR, f"genre:{genre}")
        for genre in GENRES
    ]
    atoms += [
        AtomDef(
            f"FAVORITE GENRE {genre.upper()}",
            AtomKind.INTERACTION_DERIVED,
            f"favorite_genre:{genre}",
        )
        for genre in GENRES
    ]
    atoms += [
        AtomDef(display, AtomKind.ITEM_INDICATOR, f"decade:{key}")
        for key, display, _, _ in DECADES
    ]
    return atoms


def build_catalog(
    kind: str,
    stats: Optional[InteractionStats] = None,
    thresholds: Optional[Mapping[str, Union[float, Sequence[float]]]] = None,
    percentiles: Sequence[float] = DEFAULT_PERCENTILES,
) -> AtomCatalog:
    """
    Build the fixed atom catalog of a dataset.

    The synthetic catalog holds HIGH, GENRE, RECENT, CAST, DIRECTOR and
    COOKIE. The MovieLens catalog holds 77 indicator atoms followed by the
    stat-threshold atoms: one per statistic when thresholds are given as
    numbers, or one per distinct percentile candidate otherwise.

    Args:
        kind: "synthetic" or "movielens"
        stats: Training statistics (needed for movielens without thresholds)
        thresholds: Threshold or candidate list per statistic
        percentiles: Candidate percentiles when thresholds are not given

    Returns:
        Atom catalog

    Raises:
        ConfigurationException: On an unknown kind
        ValidationException: If movielens has neither stats nor thresholds
    """
    if kind == SYNTHETIC:
        return AtomCatalog(
            AtomDef(name, AtomKind.INTERACTION_DERIVED, f"synthetic:{name}")
            for name in SYNTHETIC_ATOMS
        )
    if kind != MOVIELENS:
        raise ConfigurationException(f"Unknown catalog kind: {kind}")

    if thresholds is None:
        if stats is None:
            raise ValidationException("movielens catalog needs statistics or thresholds")
        thresholds = candidate_thresholds(stats, percentiles)
    atoms = _movielens_base_atoms()
    for source in STAT_SOURCES:
        if source not in thresholds:
            raise ValidationException(f"missing threshold for {source}")
        values = thresholds[source]
        for threshold in [values] if np.isscalar(values) else values:
            atoms.append(stat_atom(source, float(threshold)))
    return AtomCatalog(atoms)


def _split_source(source: str):
    prefix, _, value = source.partition(":")
    return prefix, value


def atomize(
    user: UserProfile, item: MovieProfile, stats: InteractionStats, catalog: AtomCatalog
) -> np.ndarray:
    """
    Atom vector of one user-item pair.

    A pure function of its arguments. Unknown demographics give 0 on every
    indicator of that feature; unseen users and items use the fallback
    statistics.

    Returns:
        uint8 vector of length len(catalog)
    """
    favorite = stats.favorite_genre(user.user_id)
    vector = np.zeros(len(catalog), dtype=np.uint8)
    for j, atom in enumerate(catalog):
        prefix, value = _split_source(atom.source)
        if prefix == "gender":
            hit = user.gender == value
        elif prefix == "age":
            hit = user.age is not None and user.age == int(value)
        elif prefix == "occupation":
            hit = user.occupation is not None and user.occupation == int(value)
        elif prefix == "genre":
            hit = value in item.genres
        elif prefix == "favorite_genre":
            hit = favorite == value and value in item.genres
        elif prefix == "decade":
            hit = decade_key(item.year) == value
        elif atom.source in STAT_SOURCES:
            entity = user.user_id if atom.source == USER_MEAN_RATING else item.item_id
            hit = stats.lookup(atom.source, [entity])[0] >= atom.threshold
        else:
            raise ValidationException(f"atom {atom.name!r} cannot be computed from profiles")
        vector[j] = 1 if hit else 0
    return vector


class Atomizer:
    """Vectorized atomization of user-item pairs against MovieLens metadata."""

    def __init__(
        self,
        users: pd.DataFrame,
        movies: pd.DataFrame,
        stats: InteractionStats,
        catalog: AtomCatalog,
    ):
        """
        Args:
            users: user_id, gender, age, occupation
            movies: item_id, year, genres
            stats: Training statistics
            catalog: Catalog fixing the column order
        """
        self.stats = stats
        self.catalog = catalog
        self._users = users.set_index("user_id").loc[:, ["gender", "age", "occupation"]]
        indexed = movies.set_index("item_id")
        self._years = indexed["year"].astype(np.float64)
        self._genres = pd.DataFrame(
            {g: indexed["genres"].map(lambda gs, g=g: g in gs) for g in GENRES},
            index=indexed.index,
        )
        self._movie_genres: Dict[int, FrozenSet[str]] = {
            int(item_id): frozenset(gs) for item_id, gs in indexed["genres"].items()
        }

    def user_profile(self, user_id: int) -> UserProfile:
        if user_id not in self._users.index:
            return UserProfile(user_id=user_id)
        row = self._users.loc[user_id]
        return UserProfile(
            user_id=user_id,
            gender=str(row["gender"]),
            age=int(row["age"]),
            occupation=int(row["occupation"]),
        )

    def movie_profile(self, item_id: int) -> MovieProfile:
        year = self._years.get(item_id)
        return MovieProfile(
            item_id=item_id,
            genres=self._movie_genres.get(item_id, frozenset()),
            year=None if year is None or np.isnan(year) else int(year),
        )

    def atomize_pair(self, user_id: int, item_id: int) -> np.ndarray:
        return atomize(
            self.user_profile(user_id), self.movie_profile(item_id), self.stats, self.catalog
        )

    def atomize_frame(
        self,
        pairs: pd.DataFrame,
        chunk_size: int = 65536,
        threads: Optional[int] = None,
    ) -> np.ndarray:
        """
        Atom matrix of every (user_id, item_id) row, in row order.

        Chunks are atomized on a thread pool and stacked in input order.

        Returns:
            uint8 matrix of shape (len(pairs), len(catalog))
        """
        user_ids = pairs["user_id"].to_numpy(dtype=np.int64)
        item_ids = pairs["item_id"].to_numpy(dtype=np.int64)
        if len(user_ids) == 0:
            return np.zeros((0, len(self.catalog)), dtype=np.uint8)
        bounds = range(0, len(user_ids), chunk_size)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(
                pool.map(
                    lambda s: self._atomize_chunk(
                        user_ids[s : s + chunk_size], item_ids[s : s + chunk_size]
                    ),
                    bounds,
                )
            )
        return np.vstack(chunks)

    def _atomize_chunk(self, user_ids: np.ndarray, item_ids: np.ndarray) -> np.ndarray:
        users = self._users.reindex(user_ids)
        genres = self._genres.reindex(item_ids, fill_value=False).to_numpy(dtype=bool)
        years = self._years.reindex(item_ids).to_numpy()
        decades = np.array([decade_key(y) for y in years], dtype=object)
        favorites = self.stats.user_favorite_genre.reindex(user_ids).to_numpy()
        genre_column = {g: i for i, g in enumerate(GENRES)}

        out = np.zeros((len(user_ids), len(self.catalog)), dtype=np.uint8)
        for j, atom in enumerate(self.catalog):
            prefix, value = _split_source(atom.source)
            if prefix == "gender":
                hit = (users["gender"] == value).to_numpy()
            elif prefix in ("age", "occupation"):
                hit = (users[prefix] == int(value)).to_numpy()
            elif prefix == "genre":
                hit = genres[:, genre_column[value]]
            elif prefix == "favorite_genre":
                hit = (favorites == value) & genres[:, genre_column[value]]
            elif prefix == "decade":
                hit = decades == value
            elif atom.source in STAT_SOURCES:
                entities = user_ids if atom.source == USER_MEAN_RATING else item_ids
                hit = self.stats.lookup(atom.source, entities) >= atom.threshold
            else:
                raise ValidationException(f"atom {atom.name!r} cannot be computed from metadata")
            out[:, j] = np.asarray(hit, dtype=bool)
        return out


def synthetic_atoms(frame: pd.DataFrame, catalog: AtomCatalog) -> np.ndarray:
    """Atom matrix of a synthetic corpus in catalog order."""
    names = [atom.source.partition(":")[2] for atom in catalog]
    missing = [name for name in names if name not in frame.columns]
    if missing:
        raise ValidationException(f"synthetic frame lacks atoms {missing}")
    return frame.loc[:, names].to_numpy(dtype=np.uint8)

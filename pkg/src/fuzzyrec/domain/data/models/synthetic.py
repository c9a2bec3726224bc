"""Synthetic corpus with planted rules."""

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
import pandas as pd

from fuzzyrec.domain.exceptions.exception import ValidationException

SYNTHETIC_ATOMS = ("HIGH", "GENRE", "RECENT", "CAST", "DIRECTOR", "COOKIE")
SYNTHETIC_COLUMNS = ("user_id", "item_id") + SYNTHETIC_ATOMS + ("label",)


def ground_truth(high, genre, recent, cast, director):
    """RELEVANT = HIGH or (RECENT and GENRE) or (RECENT and CAST and DIRECTOR).

    Works elementwise on numpy arrays as well as on plain ints.
    """
    high, genre, recent, cast, director = (
        np.asarray(v, dtype=bool) for v in (high, genre, recent, cast, director)
    )
    fired = high | (recent & genre) | (recent & cast & director)
    return fired.astype(np.uint8) if fired.ndim else int(fired)


def rules_fired(high, genre, recent, cast, director) -> np.ndarray:
    """(N, 3) boolean matrix of which planted rule fires per sample."""
    high, genre, recent, cast, director = (
        np.asarray(v, dtype=bool) for v in (high, genre, recent, cast, director)
    )
    return np.column_stack([high, recent & genre, recent & cast & director])


@dataclass(frozen=True)
class SyntheticSample:
    """One user-item pair of the synthetic corpus."""

    user_id: int
    item_id: int
    HIGH: int
    GENRE: int
    RECENT: int
    CAST: int
    DIRECTOR: int
    COOKIE: int
    label: int

    def __post_init__(self):
        """Check the label against the planted formula."""
        for name in SYNTHETIC_ATOMS + ("label",):
            if getattr(self, name) not in (0, 1):
                raise ValidationException(f"{name} must be 0 or 1")
        expected = ground_truth(self.HIGH, self.GENRE, self.RECENT, self.CAST, self.DIRECTOR)
        if self.label != expected:
            raise ValidationException(f"label {self.label} contradicts the planted rules")


@dataclass(frozen=True)
class SyntheticCorpus:
    """Column-oriented synthetic corpus; iterating yields SyntheticSample rows."""

    frame: pd.DataFrame

    def __post_init__(self):
        missing = [c for c in SYNTHETIC_COLUMNS if c not in self.frame.columns]
        if missing:
            raise ValidationException(f"synthetic frame lacks columns {missing}")

    def __len__(self) -> int:
        return len(self.frame)

    def __iter__(self) -> Iterator[SyntheticSample]:
        for row in self.frame.loc[:, list(SYNTHETIC_COLUMNS)].itertuples(index=False):
            yield SyntheticSample(*(int(v) for v in row))

    def atoms(self, names: Sequence[str] = SYNTHETIC_ATOMS) -> np.ndarray:
        return self.frame.loc[:, list(names)].to_numpy(dtype=np.uint8)

    @property
    def labels(self) -> np.ndarray:
        return self.frame["label"].to_numpy(dtype=np.float64)

    @property
    def positive_rate(self) -> float:
        return float(self.frame["label"].mean())

    def rule_support(self) -> np.ndarray:
        """Number of samples on which each planted rule fires."""
        f = self.frame
        fired = rules_fired(f["HIGH"], f["GENRE"], f["RECENT"], f["CAST"], f["DIRECTOR"])
        return fired.sum(axis=0)

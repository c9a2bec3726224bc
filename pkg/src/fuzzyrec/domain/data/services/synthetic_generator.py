"""
Synthetic corpus with three planted horn clauses.

    HIGH -> RELEVANT
    RECENT and GENRE -> RELEVANT
    RECENT and CAST and DIRECTOR -> RELEVANT

Half of the samples are positive. Positives are split into three groups of
equal size (within one); in each group only that group's rule fires unless
overlap is enabled. Negatives are drawn uniformly from the assignments where
no rule fires. COOKIE is an independent fair coin.
"""

import itertools
import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from fuzzyrec.domain.data.models.synthetic import (
    SYNTHETIC_ATOMS,
    SYNTHETIC_COLUMNS,
    SyntheticCorpus,
    ground_truth,
    rules_fired,
)
from fuzzyrec.domain.exceptions.exception import DataException, ValidationException

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 1_000_209
DEFAULT_USERS = 6040
DEFAULT_ITEMS = 3883

# Every (HIGH, GENRE, RECENT, CAST, DIRECTOR) assignment, grouped by which rules fire.
_ALL = np.array(list(itertools.product((0, 1), repeat=5)), dtype=np.uint8)
_FIRED = rules_fired(*_ALL.T)
_NONE_FIRE = _ALL[~_FIRED.any(axis=1)]
_ONLY = [_ALL[_FIRED[:, r] & (_FIRED.sum(axis=1) == 1)] for r in range(3)]
_ANY = [_ALL[_FIRED[:, r]] for r in range(3)]


def _group_sizes(total: int, groups: int) -> np.ndarray:
    sizes = np.full(groups, total // groups, dtype=np.int64)
    sizes[: total % groups] += 1
    return sizes


def generate_synthetic(
    seed: int = 0,
    n_samples: int = DEFAULT_SAMPLES,
    n_users: int = DEFAULT_USERS,
    n_items: int = DEFAULT_ITEMS,
    overlap: bool = False,
) -> SyntheticCorpus:
    """
    Generate the synthetic corpus.

    User and item ids are assigned round-robin after shuffling and carry no
    signal.

    Args:
        seed: Generator seed
        n_samples: Number of user-item pairs
        n_users: Size of the user id range
        n_items: Size of the item id range
        overlap: Let positives of one group fire other rules too

    Returns:
        Corpus whose labels equal the planted formula
    """
    if n_samples < 2:
        raise ValidationException("synthetic corpus needs at least 2 samples")
    rng = np.random.default_rng(seed)
    n_positive = n_samples // 2
    supports = _ONLY if not overlap else _ANY

    blocks = []
    for rule, size in enumerate(_group_sizes(n_positive, 3)):
        pool = supports[rule]
        blocks.append(pool[rng.integers(0, len(pool), size=size)])
    blocks.append(_NONE_FIRE[rng.integers(0, len(_NONE_FIRE), size=n_samples - n_positive)])
    atoms = np.concatenate(blocks)
    atoms = atoms[rng.permutation(n_samples)]

    cookie = rng.integers(0, 2, size=n_samples, dtype=np.uint8)
    labels = ground_truth(*atoms.T)
    if labels.sum() != n_positive:
        raise ValidationException("generated labels disagree with the planted rules")

    index = np.arange(n_samples)
    frame = pd.DataFrame(
        {
            "user_id": index % n_users + 1,
            "item_id": index % n_items + 1,
            "HIGH": atoms[:, 0],
            "GENRE": atoms[:, 1],
            "RECENT": atoms[:, 2],
            "CAST": atoms[:, 3],
            "DIRECTOR": atoms[:, 4],
            "COOKIE": cookie,
            "label": labels,
        }
    )
    corpus = SyntheticCorpus(frame)
    logger.info(
        f"Generated {n_samples} synthetic samples (seed={seed}, "
        f"positive rate={corpus.positive_rate:.4f}, support={corpus.rule_support().tolist()})"
    )
    return corpus


def write_synthetic_csv(corpus: SyntheticCorpus, path: Union[str, Path]) -> None:
    """Write the corpus with header user_id,item_id,HIGH,...,COOKIE,label."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    corpus.frame.loc[:, list(SYNTHETIC_COLUMNS)].to_csv(path, index=False)


def read_synthetic_csv(path: Union[str, Path]) -> SyntheticCorpus:
    """
    Read a corpus written by write_synthetic_csv.

    Raises:
        DataException: If the file is missing, malformed or mislabeled
    """
    path = Path(path)
    if not path.is_file():
        raise DataException(f"Synthetic corpus not found: {path}")
    try:
        frame = pd.read_csv(path, dtype={name: np.uint8 for name in SYNTHETIC_ATOMS})
    except (ValueError, pd.errors.ParserError) as e:
        raise DataException(f"Cannot read synthetic corpus {path}: {e}") from e
    if list(frame.columns) != list(SYNTHETIC_COLUMNS):
        raise DataException(f"{path}: unexpected header {list(frame.columns)}")
    expected = ground_truth(*(frame[name] for name in SYNTHETIC_ATOMS[:5]))
    if not np.array_equal(expected, frame["label"].to_numpy()):
        raise DataException(f"{path}: labels do not follow the planted rules")
    return SyntheticCorpus(frame)

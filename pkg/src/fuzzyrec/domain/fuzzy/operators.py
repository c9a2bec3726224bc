"""
Fuzzy logic over the product t-norm.

NOT(a) = 1 - a, AND(a, b) = a * b, OR(a, b) = a + b - a * b, plus the
vectorized reductions and the weighted-atom combinator used by rule layers.
Every function accepts Python floats or numpy arrays (broadcasting like numpy)
and returns a float for scalar input, an ndarray otherwise.
"""

from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from fuzzyrec.domain.exceptions.exception import (
    EmptyInputError,
    FuzzyDomainError,
    ShapeMismatchError,
)

# Rounding slack tolerated at the edges of [0, 1].
UNIT_SLACK = 1e-12

FuzzyValue = float
Fuzzy = Union[float, np.ndarray]


def as_unit_array(values: Any, name: str = "value") -> np.ndarray:
    """Convert to float64 and check every element lies in [0, 1] (within slack)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        return arr
    if np.isnan(arr).any():
        raise FuzzyDomainError(f"{name} contains NaN")
    low, high = arr.min(), arr.max()
    if low < -UNIT_SLACK or high > 1.0 + UNIT_SLACK:
        raise FuzzyDomainError(f"{name} outside [0, 1]: range [{low}, {high}]")
    return arr


def _settle(result: np.ndarray) -> Fuzzy:
    """Clip rounding noise back into [0, 1]; anything larger is a logic error."""
    if result.size:
        low, high = result.min(), result.max()
        if low < -UNIT_SLACK or high > 1.0 + UNIT_SLACK:
            raise FuzzyDomainError(f"fuzzy result left [0, 1]: range [{low}, {high}]")
    clipped = np.clip(result, 0.0, 1.0)
    if clipped.ndim == 0:
        return float(clipped)
    return clipped


def as_fuzzy_value(value: float) -> FuzzyValue:
    """Validate a scalar truth degree."""
    return float(_settle(as_unit_array(value)))


@dataclass(frozen=True)
class FuzzyVector:
    """Fixed-length vector of truth degrees, all in [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        arr = as_unit_array(self.values, "FuzzyVector")
        if arr.ndim != 1:
            raise ShapeMismatchError(f"FuzzyVector must be 1-D, got shape {arr.shape}")
        if arr.size == 0:
            raise EmptyInputError("FuzzyVector needs at least one element")
        arr = np.clip(arr, 0.0, 1.0)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def fnot(a: Any) -> Fuzzy:
    """NOT(a) = 1 - a."""
    return _settle(1.0 - as_unit_array(a, "a"))


def fand(a: Any, b: Any) -> Fuzzy:
    """AND(a, b) = a * b (Hadamard product for vectors)."""
    return _settle(as_unit_array(a, "a") * as_unit_array(b, "b"))


def for_(a: Any, b: Any) -> Fuzzy:
    """OR(a, b) = a + b - a * b."""
    x, y = as_unit_array(a, "a"), as_unit_array(b, "b")
    return _settle(x + y - x * y)


def _check_reducible(arr: np.ndarray, axis: int) -> None:
    if arr.ndim == 0:
        raise ShapeMismatchError("reduction needs a vector, got a scalar")
    if arr.shape[axis] == 0:
        raise EmptyInputError("cannot reduce an empty fuzzy vector")


def fand_reduce(a: Any, axis: int = -1) -> Fuzzy:
    """AND over a vector: the product of its elements."""
    arr = as_unit_array(a, "a")
    _check_reducible(arr, axis)
    return _settle(np.prod(arr, axis=axis))


def for_reduce(a: Any, axis: int = -1) -> Fuzzy:
    """
    OR over a vector, the left fold OR(OR(a1, a2), a3)...

    For the product conorm the fold has the closed form 1 - prod(1 - a_i),
    which is what is evaluated.
    """
    arr = as_unit_array(a, "a")
    _check_reducible(arr, axis)
    return _settle(1.0 - np.prod(1.0 - arr, axis=axis))


def weighted_atoms(a: Any, w_fuzzy: Any) -> Fuzzy:
    """
    Weighted atoms a'_j = OR(a_j, 1 - w'_j).

    A weight of 1 passes the atom through; a weight of 0 turns it into a
    tautology that AND ignores. Leading axes broadcast; the atom axis (last)
    must match exactly.

    Raises:
        ShapeMismatchError: If the atom axes differ in length
    """
    atoms = as_unit_array(a, "atoms")
    weights = as_unit_array(w_fuzzy, "w_fuzzy")
    if atoms.ndim == 0 or weights.ndim == 0 or atoms.shape[-1] != weights.shape[-1]:
        raise ShapeMismatchError(
            f"atom/weight length mismatch: {atoms.shape} vs {weights.shape}"
        )
    negated = 1.0 - weights
    return _settle(atoms + negated - atoms * negated)


def leave_one_out_products(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """
    Product of all elements except the one at each position, along `axis`.

    Built from exclusive prefix and suffix products, so it stays exact when
    an element is 0 (no division).
    """
    x = np.moveaxis(np.asarray(values, dtype=np.float64), axis, -1)
    ones = np.ones(x.shape[:-1] + (1,), dtype=np.float64)
    prefix = np.concatenate([ones, np.cumprod(x[..., :-1], axis=-1)], axis=-1)
    reversed_x = x[..., ::-1]
    suffix = np.concatenate([ones, np.cumprod(reversed_x[..., :-1], axis=-1)], axis=-1)[..., ::-1]
    return np.moveaxis(prefix * suffix, -1, axis)

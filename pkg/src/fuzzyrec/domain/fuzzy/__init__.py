"""Product t-norm fuzzy algebra."""

from .operators import (
    FuzzyVector,
    as_fuzzy_value,
    fand,
    fand_reduce,
    fnot,
    for_,
    for_reduce,
    leave_one_out_products,
    weighted_atoms,
)

__all__ = [
    "FuzzyVector",
    "as_fuzzy_value",
    "fnot",
    "fand",
    "for_",
    "fand_reduce",
    "for_reduce",
    "weighted_atoms",
    "leave_one_out_products",
]

"""Exception hierarchy."""

from .exception import (
    CheckFailedException,
    ConfigurationException,
    DataException,
    EmptyInputError,
    FuzzyDomainError,
    FuzzyRecException,
    MalformedLineError,
    ShapeMismatchError,
    TrainingException,
    ValidationException,
)

__all__ = [
    "FuzzyRecException",
    "ValidationException",
    "FuzzyDomainError",
    "EmptyInputError",
    "ShapeMismatchError",
    "DataException",
    "MalformedLineError",
    "TrainingException",
    "ConfigurationException",
    "CheckFailedException",
]

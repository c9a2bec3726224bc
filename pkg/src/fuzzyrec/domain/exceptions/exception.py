"""Exception hierarchy for fuzzyrec."""

from typing import Optional


class FuzzyRecException(Exception):
    """Base exception for all fuzzyrec errors."""

    pass


class ValidationException(FuzzyRecException):
    """Validation failed."""

    pass


class FuzzyDomainError(ValidationException):
    """A truth value left the unit interval by more than rounding slack."""

    pass


class EmptyInputError(ValidationException):
    """A reduction, dataset or ranking that must be nonempty was empty."""

    pass


class ShapeMismatchError(ValidationException):
    """Lengths or matrix shapes disagree."""

    pass


class DataException(FuzzyRecException):
    """Dataset file missing or malformed."""

    pass


class MalformedLineError(DataException):
    """A dataset line could not be parsed."""

    def __init__(self, message: str, path: str, line_number: int):
        self.path = path
        self.line_number = line_number
        super().__init__(f"{path}:{line_number}: {message}")


class TrainingException(FuzzyRecException):
    """Training diverged (non-finite gradient or weights)."""

    def __init__(self, message: str, epoch: Optional[int] = None):
        self.epoch = epoch
        super().__init__(message if epoch is None else f"epoch {epoch}: {message}")


class ConfigurationException(FuzzyRecException):
    """Configuration error."""

    pass


class CheckFailedException(FuzzyRecException):
    """A self-check did not meet its tolerance."""

    pass

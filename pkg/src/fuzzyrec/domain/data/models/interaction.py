"""Interaction data model."""

from dataclasses import dataclass

from fuzzyrec.domain.exceptions.exception import ValidationException

RATING_SCALE = (1.0, 5.0)

# Column layout shared by every interaction frame in the package.
INTERACTION_COLUMNS = ("user_id", "item_id", "rating", "timestamp")


@dataclass(frozen=True)
class Interaction:
    """One rating event.

    Attributes:
        user_id: Positive user id
        item_id: Positive item id
        rating: Rating on the 1-5 scale
        timestamp: Seconds since the epoch
    """

    user_id: int
    item_id: int
    rating: float
    timestamp: int

    def __post_init__(self):
        """Validate ids and rating."""
        if self.user_id <= 0 or self.item_id <= 0:
            raise ValidationException(
                f"ids must be positive, got user {self.user_id}, item {self.item_id}"
            )
        low, high = RATING_SCALE
        if not low <= self.rating <= high:
            raise ValidationException(f"rating {self.rating} outside [{low}, {high}]")

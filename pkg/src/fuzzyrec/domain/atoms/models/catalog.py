"""
Atom catalog domain model.

A catalog fixes the meaning of every position of an atom vector: position j
of any vector built with a catalog is catalog[j].
"""

import re
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from fuzzyrec.domain.exceptions.exception import ConfigurationException, ValidationException

_THRESHOLD_SUFFIX = re.compile(r"\s*\([^()]*\+\)$")


class AtomKind(Enum):
    """Where an atom's truth value comes from."""

    USER_INDICATOR = "user-indicator"
    ITEM_INDICATOR = "item-indicator"
    USER_STAT_THRESHOLD = "user-stat-threshold"
    ITEM_STAT_THRESHOLD = "item-stat-threshold"
    INTERACTION_DERIVED = "interaction-derived"

    @property
    def is_stat_threshold(self) -> bool:
        return self in (AtomKind.USER_STAT_THRESHOLD, AtomKind.ITEM_STAT_THRESHOLD)

    @classmethod
    def parse(cls, value: str) -> "AtomKind":
        try:
            return cls(value)
        except ValueError as e:
            raise ConfigurationException(f"Unknown atom kind: {value}") from e


def format_threshold(threshold: float) -> str:
    """4.0 -> '4.0', 228 -> '228.0', 3.5714 -> '3.57'."""
    if abs(threshold - round(threshold, 1)) < 1e-9:
        return f"{threshold:.1f}"
    return f"{threshold:.2f}"


def short_name(name: str) -> str:
    """Atom name without a trailing threshold such as ' (4.0+)'."""
    return _THRESHOLD_SUFFIX.sub("", name)


@dataclass(frozen=True)
class AtomDef:
    """Definition of one named propositional atom.

    Attributes:
        name: Display name, unique within a catalog
        kind: Source category
        source: Feature identifier, e.g. "genre:Comedy" or "item_mean_rating"
        threshold: Cut-off for stat-threshold atoms, None otherwise
    """

    name: str
    kind: AtomKind
    source: str
    threshold: Optional[float] = None

    def __post_init__(self):
        """Validate the threshold/kind pairing."""
        if not self.name or not self.name.strip():
            raise ValidationException("atom name cannot be empty")
        if self.kind.is_stat_threshold and self.threshold is None:
            raise ValidationException(f"stat-threshold atom {self.name!r} needs a threshold")
        if not self.kind.is_stat_threshold and self.threshold is not None:
            raise ValidationException(
                f"atom {self.name!r} of kind {self.kind.value} has a threshold"
            )

    @property
    def short_name(self) -> str:
        return short_name(self.name)


class AtomCatalog:
    """Ordered, immutable list of atom definitions."""

    def __init__(self, atoms: Iterable[AtomDef]):
        """
        Args:
            atoms: Definitions in vector order

        Raises:
            ValidationException: If empty or names repeat
        """
        self._atoms: Tuple[AtomDef, ...] = tuple(atoms)
        if not self._atoms:
            raise ValidationException("catalog needs at least one atom")
        self._index: Dict[str, int] = {}
        for position, atom in enumerate(self._atoms):
            if atom.name in self._index:
                raise ValidationException(f"duplicate atom name {atom.name!r}")
            self._index[atom.name] = position

    def __len__(self) -> int:
        return len(self._atoms)

    def __iter__(self) -> Iterator[AtomDef]:
        return iter(self._atoms)

    def __getitem__(self, position: int) -> AtomDef:
        return self._atoms[position]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AtomCatalog) and self._atoms == other._atoms

    def __hash__(self) -> int:
        return hash(self._atoms)

    def __repr__(self) -> str:
        return f"AtomCatalog(n={len(self)})"

    @property
    def names(self) -> List[str]:
        return [atom.name for atom in self._atoms]

    def index_of(self, name: str) -> int:
        if name not in self._index:
            raise ValidationException(f"atom {name!r} not in catalog")
        return self._index[name]

    def by_source(self, source: str) -> List[int]:
        """Positions of the atoms built from one feature, in catalog order."""
        return [i for i, atom in enumerate(self._atoms) if atom.source == source]

    def subset(self, positions: Sequence[int]) -> "AtomCatalog":
        """Catalog of the given positions, keeping their relative order."""
        return AtomCatalog(self._atoms[i] for i in sorted(set(positions)))

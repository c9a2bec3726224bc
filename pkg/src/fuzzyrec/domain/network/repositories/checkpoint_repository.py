"""
Repository for rule-network checkpoints.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from fuzzyrec.domain.atoms.models.catalog import AtomCatalog
from fuzzyrec.domain.exceptions.exception import ShapeMismatchError
from fuzzyrec.domain.network.models.rule_network import RuleNetwork


@dataclass
class Checkpoint:
    """A trained network, the names of its atoms (column order) and optionally their catalog."""

    network: RuleNetwork
    atom_names: List[str] = field(default_factory=list)
    catalog: Optional[AtomCatalog] = None

    def __post_init__(self):
        if len(self.atom_names) != self.network.n:
            raise ShapeMismatchError(
                f"checkpoint has {len(self.atom_names)} atom names for n={self.network.n}"
            )
        if self.catalog is not None and list(self.catalog.names) != list(self.atom_names):
            raise ShapeMismatchError("catalog names differ from the checkpoint atom names")


class CheckpointRepository(ABC):
    """Abstract repository for checkpoint storage."""

    @abstractmethod
    def save(self, name: str, checkpoint: Checkpoint) -> None:
        """Save or overwrite a checkpoint."""
        pass

    @abstractmethod
    def load(self, name: str) -> Optional[Checkpoint]:
        """Load a checkpoint, None if absent."""
        pass

    @abstractmethod
    def list_names(self) -> List[str]:
        """List stored checkpoint names."""
        pass

    def get_name(self) -> str:
        """Get repository name."""
        return self.__class__.__name__


class InMemoryCheckpointRepository(CheckpointRepository):
    """Simple in-memory checkpoint storage (copies in and out)."""

    def __init__(self):
        """Initialize with empty storage."""
        self._checkpoints: Dict[str, Checkpoint] = {}

    def save(self, name: str, checkpoint: Checkpoint) -> None:
        if not name or not name.strip():
            raise ValueError("checkpoint name cannot be empty")
        self._checkpoints[name] = Checkpoint(
            RuleNetwork(np.array(checkpoint.network.weights)),
            list(checkpoint.atom_names),
            checkpoint.catalog,
        )

    def load(self, name: str) -> Optional[Checkpoint]:
        stored = self._checkpoints.get(name)
        if stored is None:
            return None
        return Checkpoint(stored.network.copy(), list(stored.atom_names), stored.catalog)

    def list_names(self) -> List[str]:
        return sorted(self._checkpoints)

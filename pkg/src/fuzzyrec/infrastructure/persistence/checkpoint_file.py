"""
Checkpoint text format.

    k n
    k lines of n space-separated weights (repr, so the floats round-trip exactly)
    n lines with one atom name each
"""

from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from fuzzyrec.domain.exceptions.exception import DataException, FuzzyRecException
from fuzzyrec.domain.network.models.rule_network import RuleNetwork
from fuzzyrec.domain.network.repositories.checkpoint_repository import (
    Checkpoint,
    CheckpointRepository,
)
from fuzzyrec.infrastructure.persistence.catalog_file import read_catalog, write_catalog

SUFFIX = ".ckpt"
CATALOG_SUFFIX = ".catalog.tsv"


def format_checkpoint(checkpoint: Checkpoint) -> str:
    net = checkpoint.network
    lines = [f"{net.k} {net.n}"]
    lines += [" ".join(repr(float(w)) for w in row) for row in net.weights]
    lines += list(checkpoint.atom_names)
    return "\n".join(lines) + "\n"


def parse_checkpoint(text: str, source: str = "<checkpoint>") -> Checkpoint:
    """
    Parse the checkpoint format.

    Raises:
        DataException: If the header, a weight row or the name list is malformed
    """
    lines = text.splitlines()
    try:
        k, n = (int(part) for part in lines[0].split())
    except (IndexError, ValueError) as e:
        raise DataException(f"{source}: bad header, expected 'k n'") from e
    if len(lines) < 1 + k + n:
        raise DataException(f"{source}: expected {1 + k + n} lines, found {len(lines)}")
    rows = []
    for i in range(k):
        try:
            row = [float(value) for value in lines[1 + i].split()]
        except ValueError as e:
            raise DataException(f"{source}:{i + 2}: non-numeric weight") from e
        if len(row) != n:
            raise DataException(f"{source}:{i + 2}: expected {n} weights, found {len(row)}")
        rows.append(row)
    names = lines[1 + k : 1 + k + n]
    try:
        return Checkpoint(RuleNetwork(np.array(rows)), names)
    except FuzzyRecException as e:
        raise DataException(f"{source}: {e}") from e


def write_checkpoint(checkpoint: Checkpoint, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_checkpoint(checkpoint), encoding="utf-8")
    return path


def read_checkpoint(path: Union[str, Path]) -> Checkpoint:
    path = Path(path)
    if not path.is_file():
        raise DataException(f"Checkpoint not found: {path}")
    return parse_checkpoint(path.read_text(encoding="utf-8"), str(path))


class FileCheckpointRepository(CheckpointRepository):
    """File-based checkpoint storage, `<name>.ckpt` plus `<name>.catalog.tsv` if known."""

    def __init__(self, storage_dir: Union[str, Path] = "checkpoints"):
        """
        Initialize file-based repository.

        Args:
            storage_dir: Directory holding the checkpoint files (created on first save)
        """
        self.storage_dir = Path(storage_dir)

    def _get_file_path(self, name: str) -> Path:
        # Sanitize name for filesystem
        safe_name = "".join(c if c.isalnum() or c in "-_." else "_" for c in name)
        return self.storage_dir / f"{safe_name}{SUFFIX}"

    def save(self, name: str, checkpoint: Checkpoint) -> None:
        """
        Save a checkpoint and its catalog.

        Raises:
            ValueError: If name is empty
            IOError: If a file write fails
        """
        if not name or not name.strip():
            raise ValueError("checkpoint name cannot be empty")
        try:
            write_checkpoint(checkpoint, self.path_of(name))
            if checkpoint.catalog is not None:
                write_catalog(checkpoint.catalog, self.catalog_path_of(name))
        except OSError as e:
            raise IOError(f"Failed to save checkpoint {name}: {e}") from e

    def load(self, name: str) -> Optional[Checkpoint]:
        """
        Load a checkpoint, with its catalog when the catalog file exists.

        Raises:
            DataException: If either file is malformed or they disagree
        """
        file_path = self.path_of(name)
        if not file_path.exists():
            return None
        checkpoint = read_checkpoint(file_path)
        catalog_path = self.catalog_path_of(name)
        if not catalog_path.is_file():
            return checkpoint
        catalog = read_catalog(catalog_path)
        if catalog.names != checkpoint.atom_names:
            raise DataException(f"{catalog_path} does not list the atoms of {file_path}")
        return Checkpoint(checkpoint.network, checkpoint.atom_names, catalog)

    def path_of(self, name: str) -> Path:
        return self._get_file_path(name)

    def catalog_path_of(self, name: str) -> Path:
        return self.path_of(name).with_suffix(CATALOG_SUFFIX)

    def list_names(self) -> List[str]:
        return sorted(path.stem for path in self.storage_dir.glob(f"*{SUFFIX}"))

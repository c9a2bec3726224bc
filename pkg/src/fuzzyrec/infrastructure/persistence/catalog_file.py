"""Catalog export: `index<TAB>name<TAB>kind<TAB>threshold<TAB>source`, one atom per line."""

from pathlib import Path
from typing import Union

from fuzzyrec.domain.atoms.models.catalog import AtomCatalog, AtomDef, AtomKind
from fuzzyrec.domain.exceptions.exception import DataException, FuzzyRecException


def write_catalog(catalog: AtomCatalog, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        "\t".join(
            [
                str(index),
                atom.name,
                atom.kind.value,
                "" if atom.threshold is None else repr(atom.threshold),
                atom.source,
            ]
        )
        for index, atom in enumerate(catalog)
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_catalog(path: Union[str, Path]) -> AtomCatalog:
    """
    Read a catalog written by write_catalog.

    Raises:
        DataException: If the file is missing, out of order or malformed
    """
    path = Path(path)
    if not path.is_file():
        raise DataException(f"Catalog not found: {path}")
    atoms = []
    for line_number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise DataException(f"{path}:{line_number}: expected 5 fields, found {len(fields)}")
        index, name, kind, threshold, source = fields
        if index != str(len(atoms)):
            raise DataException(f"{path}:{line_number}: index {index} out of order")
        try:
            atoms.append(
                AtomDef(
                    name=name,
                    kind=AtomKind.parse(kind),
                    source=source,
                    threshold=float(threshold) if threshold else None,
                )
            )
        except (ValueError, FuzzyRecException) as e:
            raise DataException(f"{path}:{line_number}: {e}") from e
    try:
        return AtomCatalog(atoms)
    except FuzzyRecException as e:
        raise DataException(f"{path}: {e}") from e

"""File persistence."""

from .catalog_file import read_catalog, write_catalog
from .checkpoint_file import (
    FileCheckpointRepository,
    format_checkpoint,
    parse_checkpoint,
    read_checkpoint,
    write_checkpoint,
)
from .report_writer import ReportWriter, export_weights, sha256_of

__all__ = [
    "FileCheckpointRepository",
    "format_checkpoint",
    "parse_checkpoint",
    "read_checkpoint",
    "write_checkpoint",
    "read_catalog",
    "write_catalog",
    "ReportWriter",
    "export_weights",
    "sha256_of",
]

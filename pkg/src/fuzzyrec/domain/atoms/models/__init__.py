"""Atom models."""

from .catalog import AtomCatalog, AtomDef, AtomKind, format_threshold, short_name

__all__ = ["AtomCatalog", "AtomDef", "AtomKind", "format_threshold", "short_name"]

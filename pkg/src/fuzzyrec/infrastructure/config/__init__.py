"""Configuration."""

from .settings import (
    AtomConfig,
    DataConfig,
    EvalConfig,
    Settings,
    TrainConfig,
    load_settings,
)

__all__ = [
    "AtomConfig",
    "DataConfig",
    "EvalConfig",
    "Settings",
    "TrainConfig",
    "load_settings",
]

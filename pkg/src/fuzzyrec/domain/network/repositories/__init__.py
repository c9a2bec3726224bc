"""Checkpoint repositories."""

from .checkpoint_repository import Checkpoint, CheckpointRepository, InMemoryCheckpointRepository

__all__ = ["Checkpoint", "CheckpointRepository", "InMemoryCheckpointRepository"]

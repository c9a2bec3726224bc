"""Application services."""

from .experiment_service import ExperimentResult, ExperimentService, PreparedData

__all__ = ["ExperimentService", "ExperimentResult", "PreparedData"]

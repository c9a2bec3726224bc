"""Application orchestrators."""

from .repro_orchestrator import MetricsTable, ReproOrchestrator, RuleTable

__all__ = ["ReproOrchestrator", "RuleTable", "MetricsTable"]

"""
FuzzyRec - transparent recommendations from learned fuzzy rules

A fuzzy neural network whose weights read directly as Horn clauses over
human-readable atoms, with the data, training and evaluation around it.
"""

__version__ = "0.1.0"

# Main exports
from .application.orchestrators.repro_orchestrator import ReproOrchestrator
from .application.services.experiment_service import ExperimentService
from .infrastructure.di_container import ServiceContainer
from .infrastructure.config.settings import Settings, load_settings

# Domain models
from .domain.atoms.models.catalog import AtomCatalog, AtomDef, AtomKind
from .domain.network.models.rule_network import RuleNetwork
from .domain.training.services.training_service import TrainingService, train

__all__ = [
    # Application layer
    "ReproOrchestrator",
    "ExperimentService",
    "ServiceContainer",
    "Settings",
    "load_settings",
    # Domain models
    "AtomCatalog",
    "AtomDef",
    "AtomKind",
    "RuleNetwork",
    "TrainingService",
    "train",
]

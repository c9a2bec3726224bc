"""
Dependency Injection Container - centralized component wiring.

All dependencies are configured in one place for easy testing and modification.
"""

from pathlib import Path
from typing import Any, Dict, Optional

from fuzzyrec.application.orchestrators.repro_orchestrator import ReproOrchestrator
from fuzzyrec.application.services.experiment_service import ExperimentService
from fuzzyrec.domain.evaluation.services.evaluation_service import EvaluationService
from fuzzyrec.domain.exceptions.exception import ConfigurationException
from fuzzyrec.domain.network.repositories.checkpoint_repository import (
    CheckpointRepository,
    InMemoryCheckpointRepository,
)
from fuzzyrec.infrastructure.config.settings import Settings
from fuzzyrec.infrastructure.persistence.checkpoint_file import FileCheckpointRepository


class ServiceContainer:
    """
    Simple dependency injection container.

    Manages the creation and wiring of all application services.
    Makes testing easy by allowing mock injection.
    """

    def __init__(
        self, settings: Optional[Settings] = None, config: Optional[Dict[str, Any]] = None
    ):
        """
        Initialize container with configuration.

        Args:
            settings: Experiment settings (defaults to the synthetic preset)
            config: Optional wiring options with keys:
                - checkpoint_storage: 'memory' or 'file'
                - checkpoint_dir: Directory for file storage
        """
        self.settings = settings or Settings.synthetic_preset()
        self.config = config or {}
        self._instances: Dict[str, Any] = {}

    def get_checkpoint_repository(self) -> CheckpointRepository:
        """
        Get or create checkpoint repository instance.

        Returns:
            Configured checkpoint repository
        """
        if "checkpoint_repository" not in self._instances:
            storage_type = self.config.get("checkpoint_storage", "memory")

            if storage_type == "memory":
                self._instances["checkpoint_repository"] = InMemoryCheckpointRepository()
            elif storage_type == "file":
                storage_dir = Path(self.config.get("checkpoint_dir", "checkpoints"))
                self._instances["checkpoint_repository"] = FileCheckpointRepository(storage_dir)
            else:
                raise ConfigurationException(f"Unknown checkpoint storage type: {storage_type}")

        return self._instances["checkpoint_repository"]

    def get_evaluation_service(self) -> EvaluationService:
        if "evaluation_service" not in self._instances:
            self._instances["evaluation_service"] = EvaluationService(
                self.settings.eval.ks, self.settings.eval.threads
            )
        return self._instances["evaluation_service"]

    def get_experiment_service(self, dataset: Optional[str] = None) -> ExperimentService:
        """
        Get or create the experiment service of a dataset.

        Args:
            dataset: Dataset to configure; defaults to the settings' dataset.
                A different dataset switches to that dataset's preset while
                keeping this container's data paths and evaluation options.

        Returns:
            Configured experiment service
        """
        chosen = dataset or self.settings.data.dataset
        key = f"experiment_service:{chosen}"
        if key not in self._instances:
            settings = self.settings
            if chosen != settings.data.dataset:
                preset = Settings.preset(chosen)
                settings = Settings(
                    train=preset.train.model_copy(
                        update={
                            "seed": settings.train.seed,
                            "chunk_size": settings.train.chunk_size,
                            "log_every": settings.train.log_every,
                        }
                    ),
                    data=settings.data.model_copy(update={"dataset": chosen}),
                    atoms=settings.atoms,
                    eval=settings.eval,
                )
            self._instances[key] = ExperimentService(
                settings, self.get_checkpoint_repository(), self.get_evaluation_service()
            )
        return self._instances[key]

    def get_repro_orchestrator(self) -> ReproOrchestrator:
        if "repro_orchestrator" not in self._instances:
            self._instances["repro_orchestrator"] = ReproOrchestrator(self.get_experiment_service)
        return self._instances["repro_orchestrator"]

    def clear(self) -> None:
        """Clear all cached instances (useful for testing)."""
        self._instances.clear()

    def set_instance(self, key: str, instance: Any) -> None:
        """
        Override an instance (useful for testing with mocks).

        Args:
            key: Instance key (e.g., 'checkpoint_repository')
            instance: Instance to use
        """
        self._instances[key] = instance

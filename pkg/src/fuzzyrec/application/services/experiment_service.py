"""
Experiment application service - coordinates data, atoms, training and evaluation.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from fuzzyrec.domain.atoms.models.catalog import AtomCatalog
from fuzzyrec.domain.atoms.services.atomizer import (
    MOVIELENS,
    SYNTHETIC,
    Atomizer,
    build_catalog,
    synthetic_atoms,
)
from fuzzyrec.domain.atoms.services.statistics import (
    STAT_SOURCES,
    compute_stats,
    median_thresholds,
)
from fuzzyrec.domain.atoms.services.threshold_selection import (
    ThresholdSelection,
    Trainer,
    select_thresholds,
)
from fuzzyrec.domain.baseline.bias_model import BiasModel, BiasScorer, fit_bias
from fuzzyrec.domain.data.models.movielens import MovieLensData
from fuzzyrec.domain.data.models.split_dataset import SplitDataset
from fuzzyrec.domain.data.services.movielens_parser import GENRES, binarize_ratings, parse_movielens
from fuzzyrec.domain.data.services.splitting import random_split, temporal_split
from fuzzyrec.domain.data.services.synthetic_generator import generate_synthetic, read_synthetic_csv
from fuzzyrec.domain.evaluation.models.report import CandidateSet, MetricKey, MetricsReport
from fuzzyrec.domain.evaluation.services.evaluation_service import EvaluationService
from fuzzyrec.domain.exceptions.exception import ConfigurationException, DataException
from fuzzyrec.domain.network.models.rule_network import RuleNetwork
from fuzzyrec.domain.network.repositories.checkpoint_repository import (
    Checkpoint,
    CheckpointRepository,
)
from fuzzyrec.domain.network.services.network_scorer import NetworkScorer
from fuzzyrec.domain.training.models.history import TrainHistory
from fuzzyrec.domain.training.models.labeled_atoms import LabeledAtoms
from fuzzyrec.domain.training.services.training_service import TrainingService
from fuzzyrec.infrastructure.config.settings import Settings

logger = logging.getLogger(__name__)


@dataclass
class PreparedData:
    """Everything a training or evaluation run needs, built once per dataset.

    Attributes:
        dataset: "synthetic" or "movielens"
        catalog: Final atom catalog
        train: Training atoms and labels
        validation: Validation atoms and labels
        candidates: Test candidates to rank, with atoms
        ratings_train: user_id, item_id, rating rows for the bias baseline
        rating_scale: Range of ratings_train
        selection: Threshold selection outcome (MovieLens only)
        inputs: Input files and seeds, for the manifest
        seed: Seed of the synthetic corpus and its split (None for MovieLens)
    """

    dataset: str
    catalog: AtomCatalog
    train: LabeledAtoms
    validation: LabeledAtoms
    candidates: CandidateSet
    ratings_train: pd.DataFrame
    rating_scale: Tuple[float, float]
    selection: Optional[ThresholdSelection] = None
    inputs: Dict[str, str] = field(default_factory=dict)
    seed: Optional[int] = None


@dataclass
class ExperimentResult:
    """Repeated runs of one scorer."""

    report: MetricsReport
    networks: List[RuleNetwork] = field(default_factory=list)
    histories: List[TrainHistory] = field(default_factory=list)


class ExperimentService:
    """
    Application service for running experiments.

    Responsibilities:
    - Build atoms for a dataset from training data only
    - Train rule networks and the bias baseline
    - Evaluate them over seeded runs
    """

    def __init__(
        self,
        settings: Settings,
        checkpoint_repository: CheckpointRepository,
        evaluation_service: Optional[EvaluationService] = None,
    ):
        """
        Initialize with injected dependencies.

        Args:
            settings: Full configuration
            checkpoint_repository: Where trained networks are stored
            evaluation_service: Metric computation (built from settings if omitted)
        """
        self.settings = settings
        self.checkpoint_repository = checkpoint_repository
        self.evaluation_service = evaluation_service or EvaluationService(
            settings.eval.ks, settings.eval.threads
        )

    @property
    def training_service(self) -> TrainingService:
        return TrainingService(self.settings.train)

    # ===== Data preparation =====

    def prepare(
        self, catalog: Optional[AtomCatalog] = None, seed: Optional[int] = None
    ) -> PreparedData:
        """
        Load or generate the configured dataset and atomize it.

        Args:
            catalog: Catalog of an existing checkpoint. Its stat thresholds
                are reused instead of running threshold selection again.
            seed: Seed of the synthetic corpus and random split (default: train.seed).
                The MovieLens temporal split does not depend on it.

        Raises:
            ConfigurationException: On an unknown dataset or unsupported option
            DataException: If input files are missing or malformed, or the
                pinned catalog does not fit the dataset
        """
        dataset = self.settings.data.dataset
        if dataset == SYNTHETIC:
            prepared = self._prepare_synthetic(self.settings.train.seed if seed is None else seed)
        elif dataset == MOVIELENS:
            prepared = self._prepare_movielens(catalog)
        else:
            raise ConfigurationException(f"Unknown dataset: {dataset}")
        if catalog is not None and catalog.names != prepared.catalog.names:
            raise DataException(
                f"catalog with {len(catalog)} atoms does not match the {dataset} atoms"
            )
        return prepared

    def _prepare_synthetic(self, seed: int) -> PreparedData:
        data_cfg = self.settings.data
        if self.settings.eval.candidates != "rated":
            raise ConfigurationException("the synthetic corpus only supports rated candidates")
        if data_cfg.synthetic_path is not None:
            corpus = read_synthetic_csv(data_cfg.synthetic_path)
            source = str(data_cfg.synthetic_path)
        else:
            corpus = generate_synthetic(
                seed=seed,
                n_samples=data_cfg.synthetic_samples,
                n_users=data_cfg.synthetic_users,
                n_items=data_cfg.synthetic_items,
                overlap=data_cfg.synthetic_overlap,
            )
            source = f"generated(seed={seed})"
        split = random_split(corpus.frame, data_cfg.split_ratios, seed=seed)
        catalog = build_catalog(SYNTHETIC)

        def labeled(frame: pd.DataFrame) -> LabeledAtoms:
            return LabeledAtoms(synthetic_atoms(frame, catalog), frame["label"].to_numpy())

        test = split.test
        candidates = CandidateSet(
            user_ids=test["user_id"].to_numpy(dtype=np.int64),
            item_ids=test["item_id"].to_numpy(dtype=np.int64),
            relevant=test["label"].to_numpy(dtype=np.int64),
            atoms=synthetic_atoms(test, catalog),
        )
        ratings = split.train.loc[:, ["user_id", "item_id", "label"]].rename(
            columns={"label": "rating"}
        )
        self._log_split(split)
        return PreparedData(
            dataset=SYNTHETIC,
            catalog=catalog,
            train=labeled(split.train),
            validation=labeled(split.validation),
            candidates=candidates,
            ratings_train=ratings.astype({"rating": np.float64}),
            rating_scale=(0.0, 1.0),
            inputs={"synthetic": source, "split_seed": str(seed)},
            seed=seed,
        )

    def _prepare_movielens(self, pinned: Optional[AtomCatalog] = None) -> PreparedData:
        data_cfg, atom_cfg = self.settings.data, self.settings.atoms
        ratings_path, users_path, movies_path = data_cfg.movielens_files()
        data = parse_movielens(ratings_path, users_path, movies_path)
        split = temporal_split(data.ratings, data_cfg.split_ratios)
        self._log_split(split)
        stats = compute_stats(split.train, data.movies, GENRES)
        threshold = data_cfg.rating_threshold

        selection: Optional[ThresholdSelection] = None
        if pinned is not None:
            thresholds = {
                atom.source: atom.threshold for atom in pinned if atom.kind.is_stat_threshold
            }
            if set(thresholds) != set(STAT_SOURCES):
                raise DataException("catalog must hold one threshold per statistic")
            catalog = build_catalog(MOVIELENS, thresholds=thresholds)
            atomizer = Atomizer(data.users, data.movies, stats, catalog)
            train = self._labeled(atomizer, split.train, threshold)
            validation = self._labeled(atomizer, split.validation, threshold)
        elif atom_cfg.select_thresholds:
            candidates_catalog = build_catalog(MOVIELENS, stats, percentiles=atom_cfg.percentiles)
            atomizer = Atomizer(data.users, data.movies, stats, candidates_catalog)
            train = self._labeled(atomizer, split.train, threshold)
            validation = self._labeled(atomizer, split.validation, threshold)
            selection = select_thresholds(
                train,
                validation,
                candidates_catalog,
                self._selection_trainer(),
                median_thresholds(stats),
                atom_cfg.degenerate_weight,
            )
            catalog = selection.catalog
            train = LabeledAtoms(selection.select_columns(train.atoms), train.labels)
            validation = LabeledAtoms(
                selection.select_columns(validation.atoms), validation.labels
            )
            atomizer = Atomizer(data.users, data.movies, stats, catalog)
        else:
            catalog = build_catalog(MOVIELENS, thresholds=median_thresholds(stats))
            atomizer = Atomizer(data.users, data.movies, stats, catalog)
            train = self._labeled(atomizer, split.train, threshold)
            validation = self._labeled(atomizer, split.validation, threshold)

        candidates = self._movielens_candidates(atomizer, data, split.test, threshold)
        return PreparedData(
            dataset=MOVIELENS,
            catalog=catalog,
            train=train,
            validation=validation,
            candidates=candidates,
            ratings_train=split.train.loc[:, ["user_id", "item_id", "rating"]],
            rating_scale=(1.0, 5.0),
            selection=selection,
            inputs={
                "ratings": str(ratings_path),
                "users": str(users_path),
                "movies": str(movies_path),
            },
        )

    def _labeled(
        self, atomizer: Atomizer, frame: pd.DataFrame, threshold: float
    ) -> LabeledAtoms:
        atoms = atomizer.atomize_frame(
            frame, chunk_size=self.settings.train.chunk_size, threads=self.settings.eval.threads
        )
        return LabeledAtoms(atoms, binarize_ratings(frame["rating"], threshold))

    def _movielens_candidates(
        self, atomizer: Atomizer, data: MovieLensData, test: pd.DataFrame, threshold: float
    ) -> CandidateSet:
        if self.settings.eval.candidates == "rated":
            pairs = test.loc[:, ["user_id", "item_id"]]
            relevant = binarize_ratings(test["rating"], threshold)
        else:
            users = np.sort(test["user_id"].unique())
            items = np.sort(data.movies["item_id"].to_numpy())
            pairs = pd.DataFrame(
                {"user_id": np.repeat(users, len(items)), "item_id": np.tile(items, len(users))}
            )
            liked = test.loc[test["rating"] >= threshold, ["user_id", "item_id"]]
            flagged = pairs.merge(liked.assign(relevant=1), on=["user_id", "item_id"], how="left")
            relevant = flagged["relevant"].fillna(0).to_numpy(dtype=np.int64)
            logger.info(f"Ranking against all {len(items)} items for {len(users)} test users")
        atoms = atomizer.atomize_frame(
            pairs, chunk_size=self.settings.train.chunk_size, threads=self.settings.eval.threads
        )
        return CandidateSet(
            user_ids=pairs["user_id"].to_numpy(dtype=np.int64),
            item_ids=pairs["item_id"].to_numpy(dtype=np.int64),
            relevant=np.asarray(relevant, dtype=np.int64),
            atoms=atoms,
        )

    def _selection_trainer(self) -> Trainer:
        cfg = self.settings.train
        epochs = self.settings.atoms.selection_epochs
        if epochs is not None:
            cfg = cfg.model_copy(update={"epochs": epochs})
        return TrainingService(cfg).train

    @staticmethod
    def _log_split(split: SplitDataset) -> None:
        train, validation, test = split.sizes
        logger.info(
            f"{split.split_kind.value} split: train={train} validation={validation} test={test}"
        )

    # ===== Training and evaluation =====

    def train(
        self, prepared: PreparedData, seed: Optional[int] = None
    ) -> Tuple[RuleNetwork, TrainHistory]:
        """Train a rule network on the prepared atoms."""
        return self.training_service.train(prepared.train, prepared.validation, seed=seed)

    def evaluate_network(self, net: RuleNetwork, prepared: PreparedData) -> Dict[MetricKey, float]:
        scorer = NetworkScorer(net, chunk_size=self.settings.train.chunk_size)
        return self.evaluation_service.evaluate_run(scorer, prepared.candidates)

    def fit_baseline(self, prepared: PreparedData) -> BiasModel:
        cfg = self.settings.eval
        return fit_bias(
            prepared.ratings_train,
            epochs=cfg.baseline_epochs,
            reg_i=cfg.baseline_reg_items,
            reg_u=cfg.baseline_reg_users,
            rating_scale=prepared.rating_scale,
        )

    def evaluate_baseline(self, prepared: PreparedData) -> Dict[MetricKey, float]:
        scorer = BiasScorer(self.fit_baseline(prepared))
        return self.evaluation_service.evaluate_run(scorer, prepared.candidates)

    def for_seed(self, prepared: PreparedData, seed: int) -> PreparedData:
        """
        Data of one seeded run.

        The synthetic corpus and its random split are redrawn from the run
        seed. MovieLens data is returned unchanged since its split is temporal.
        """
        if prepared.dataset != SYNTHETIC or prepared.seed == seed:
            return prepared
        return self._prepare_synthetic(seed)

    def run_model(
        self, prepared: PreparedData, n_runs: Optional[int] = None, seed: Optional[int] = None
    ) -> ExperimentResult:
        """
        Train and evaluate with seeds seed, seed+1, ...

        Each run trains on for_seed(prepared, run_seed).

        Args:
            prepared: Dataset and atoms
            n_runs: Number of runs (default: eval.runs)
            seed: First seed (default: train.seed)
        """
        networks: List[RuleNetwork] = []
        histories: List[TrainHistory] = []

        def run_once(run_seed: int) -> Dict[MetricKey, float]:
            data = self.for_seed(prepared, run_seed)
            net, history = self.train(data, seed=run_seed)
            networks.append(net)
            histories.append(history)
            return self.evaluate_network(net, data)

        report = self.evaluation_service.repeat_evaluate(
            run_once,
            n_runs or self.settings.eval.runs,
            self.settings.train.seed if seed is None else seed,
        )
        return ExperimentResult(report=report, networks=networks, histories=histories)

    def run_baseline(
        self, prepared: PreparedData, n_runs: Optional[int] = None, seed: Optional[int] = None
    ) -> ExperimentResult:
        """Refit and evaluate the bias baseline on the data of each seed."""
        report = self.evaluation_service.repeat_evaluate(
            lambda run_seed: self.evaluate_baseline(self.for_seed(prepared, run_seed)),
            n_runs or self.settings.eval.runs,
            self.settings.train.seed if seed is None else seed,
        )
        return ExperimentResult(report=report)

    # ===== Checkpoints =====

    def save_network(self, name: str, net: RuleNetwork, catalog: AtomCatalog) -> Checkpoint:
        """Store the network with its catalog under a name."""
        checkpoint = Checkpoint(net, catalog.names, catalog)
        self.checkpoint_repository.save(name, checkpoint)
        logger.info(f"Saved checkpoint {name} to {self.checkpoint_repository.get_name()}")
        return checkpoint

    def load_network(self, name: str) -> Checkpoint:
        """
        Load a stored network.

        Raises:
            DataException: If no checkpoint has that name
        """
        checkpoint = self.checkpoint_repository.load(name)
        if checkpoint is None:
            raise DataException(f"Checkpoint not found: {name}")
        return checkpoint

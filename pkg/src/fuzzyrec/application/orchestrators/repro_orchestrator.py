"""
Reproduction orchestrator - runs the published experiments end to end.

Table 2 is the learned weight matrix on the synthetic corpus, Table 3 the
same on MovieLens 1M, and Table 4 the ranking metrics of the rule network
and the bias baseline on both datasets.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from fuzzyrec.application.services.experiment_service import ExperimentService, PreparedData
from fuzzyrec.domain.atoms.services.atomizer import MOVIELENS, SYNTHETIC
from fuzzyrec.domain.evaluation.models.report import MetricsReport
from fuzzyrec.domain.explain.rule_extraction import (
    ExtractedRule,
    WeightDistribution,
    duplicate_rules,
    extract_rules,
    render_horn,
    weight_distribution,
    weights_frame,
)
from fuzzyrec.domain.network.models.rule_network import RuleNetwork
from fuzzyrec.domain.training.models.history import TrainHistory

logger = logging.getLogger(__name__)

MODEL_ROW = "Our Model"
BASELINE_ROW = "BaselineOnly"


@dataclass
class RuleTable:
    """Learned rules of one training run."""

    dataset: str
    seed: int
    network: RuleNetwork
    history: TrainHistory
    prepared: PreparedData
    weights: pd.DataFrame
    rules: List[ExtractedRule]
    horn_clauses: List[str]
    duplicates: List[List[int]]
    distribution: WeightDistribution


@dataclass
class MetricsTable:
    """Rows of (dataset, model) -> report."""

    rows: Dict[Tuple[str, str], MetricsReport] = field(default_factory=dict)
    networks: Dict[str, List[RuleNetwork]] = field(default_factory=dict)


class ReproOrchestrator:
    """
    Orchestrates the reproduction runs.

    Responsibilities:
    - Pick the dataset preset for each table
    - Train, explain and evaluate through the experiment service
    - Return plain results for the CLI to render and persist
    """

    def __init__(self, service_for: Callable[[str], ExperimentService]):
        """
        Initialize with a service factory.

        Args:
            service_for: Returns the experiment service configured for a dataset
        """
        self.service_for = service_for

    def rule_table(self, dataset: str, seed: Optional[int] = None) -> RuleTable:
        """Train once and extract the rules."""
        service = self.service_for(dataset)
        run_seed = service.settings.train.seed if seed is None else seed
        prepared = service.prepare()
        net, history = service.train(prepared, seed=run_seed)
        threshold = service.settings.eval.display_threshold
        rules = extract_rules(net, prepared.catalog, threshold)
        table = RuleTable(
            dataset=dataset,
            seed=run_seed,
            network=net,
            history=history,
            prepared=prepared,
            weights=weights_frame(net, prepared.catalog),
            rules=rules,
            horn_clauses=[render_horn(rule) for rule in rules],
            duplicates=duplicate_rules(rules),
            distribution=weight_distribution(net, threshold),
        )
        for group in table.duplicates:
            logger.info(f"Rules {[i + 1 for i in group]} share the same displayed body")
        return table

    def table2(self, seed: Optional[int] = None) -> RuleTable:
        return self.rule_table(SYNTHETIC, seed)

    def table3(self, seed: Optional[int] = None) -> RuleTable:
        return self.rule_table(MOVIELENS, seed)

    def table4(
        self,
        datasets: Sequence[str] = (SYNTHETIC, MOVIELENS),
        n_runs: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> MetricsTable:
        """Mean and std of every metric over seeded runs, per dataset and model."""
        table = MetricsTable()
        for dataset in datasets:
            service = self.service_for(dataset)
            prepared = service.prepare()
            logger.info(f"Evaluating {MODEL_ROW} on {dataset}")
            model = service.run_model(prepared, n_runs, seed)
            table.rows[(dataset, MODEL_ROW)] = model.report
            table.networks[dataset] = model.networks
            logger.info(f"Evaluating {BASELINE_ROW} on {dataset}")
            baseline = service.run_baseline(prepared, n_runs, seed)
            table.rows[(dataset, BASELINE_ROW)] = baseline.report
        return table

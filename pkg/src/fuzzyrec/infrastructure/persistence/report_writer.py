"""
Run outputs under one directory: CSV reports and a manifest.json listing
inputs, seed, configuration and the SHA-256 of every file written.
"""

import hashlib
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import pandas as pd

from fuzzyrec.domain.atoms.models.catalog import AtomCatalog
from fuzzyrec.domain.evaluation.models.report import MetricsReport
from fuzzyrec.domain.explain.rule_extraction import WeightDistribution, weights_frame
from fuzzyrec.domain.network.models.rule_network import RuleNetwork
from fuzzyrec.domain.training.models.history import TrainHistory

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"


def sha256_of(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def export_weights(net: RuleNetwork, catalog: Union[AtomCatalog, Sequence[str]], path) -> Path:
    """Full k x n fuzzy weight matrix as CSV with an atom-name header."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    weights_frame(net, catalog).to_csv(path)
    return path


class ReportWriter:
    """Writes run artifacts and remembers them for the manifest."""

    def __init__(self, out_dir: Union[str, Path]):
        """
        Args:
            out_dir: Directory receiving every output file
        """
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.written: List[Path] = []

    def _track(self, path: Path) -> Path:
        if path not in self.written:
            self.written.append(path)
        logger.debug(f"Wrote {path}")
        return path

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def write_metrics(self, report: MetricsReport, name: str = "metrics.csv") -> Path:
        """CSV with header metric,k,mean,std,n_seeds."""
        frame = pd.DataFrame(report.rows(), columns=["metric", "k", "mean", "std", "n_seeds"])
        frame.to_csv(self.path(name), index=False)
        return self._track(self.path(name))

    def write_weights(
        self,
        net: RuleNetwork,
        catalog: Union[AtomCatalog, Sequence[str]],
        name: str = "weights.csv",
    ) -> Path:
        return self._track(export_weights(net, catalog, self.path(name)))

    def write_distribution(
        self, distribution: WeightDistribution, name: str = "weight_distribution.csv"
    ) -> Path:
        """Box-plot summary rows, then one row per outlier."""
        rows = distribution.rows() + [("outlier", w) for w in distribution.outliers]
        pd.DataFrame(rows, columns=["statistic", "value"]).to_csv(self.path(name), index=False)
        return self._track(self.path(name))

    def write_history(self, history: TrainHistory, name: str = "history.csv") -> Path:
        frame = pd.DataFrame(
            {
                "epoch": range(1, history.epochs + 1),
                "train_loss": history.train_loss,
                "validation_loss": history.validation_loss,
                "mean_fuzzy_weight": history.mean_fuzzy_weight,
            }
        )
        frame.to_csv(self.path(name), index=False)
        return self._track(self.path(name))

    def write_text(self, text: str, name: str) -> Path:
        self.path(name).write_text(text, encoding="utf-8")
        return self._track(self.path(name))

    def _relative(self, path: Path) -> str:
        if path.is_relative_to(self.out_dir):
            return str(path.relative_to(self.out_dir))
        return str(path)

    def track(self, path: Union[str, Path]) -> Path:
        """Add a file written elsewhere to the manifest."""
        return self._track(Path(path))

    def write_manifest(
        self,
        command: str,
        seed: Optional[int],
        inputs: Optional[Mapping[str, Any]] = None,
        config: Optional[Mapping[str, Any]] = None,
    ) -> Path:
        """
        Write manifest.json.

        Input files that exist are hashed too.
        """
        hashed_inputs: Dict[str, Any] = {}
        for key, value in (inputs or {}).items():
            entry: Dict[str, Any] = {"value": str(value)}
            if value is not None and Path(str(value)).is_file():
                entry["sha256"] = sha256_of(value)
            hashed_inputs[key] = entry
        manifest = {
            "command": command,
            "seed": seed,
            "created": datetime.now().isoformat(timespec="seconds"),
            "inputs": hashed_inputs,
            "config": dict(config or {}),
            "outputs": {
                self._relative(path): sha256_of(path)
                for path in self.written
                if path.is_file()
            },
        }
        target = self.path(MANIFEST)
        with open(target, "w") as f:
            json.dump(manifest, f, indent=2, default=str)
        return target

"""
Threshold selection for the stat-threshold atoms.

The network is trained once on a catalog holding every percentile
candidate of every statistic. Each candidate is scored by its largest fuzzy
weight over the rules, and only the best candidate per statistic is kept.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from fuzzyrec.domain.atoms.models.catalog import AtomCatalog
from fuzzyrec.domain.network.models.rule_network import RuleNetwork
from fuzzyrec.domain.training.models.labeled_atoms import LabeledAtoms

logger = logging.getLogger(__name__)

Trainer = Callable[[LabeledAtoms, Optional[LabeledAtoms]], Tuple[RuleNetwork, object]]


@dataclass
class ThresholdSelection:
    """Outcome of a selection run.

    Attributes:
        catalog: Pruned catalog
        kept_positions: Positions of the pruned catalog within the candidate catalog
        chosen: Retained threshold per statistic
        scores: Max fuzzy weight per candidate atom name
        degenerate: Statistics that fell back to the median candidate
    """

    catalog: AtomCatalog
    kept_positions: List[int]
    chosen: Dict[str, float]
    scores: Dict[str, float] = field(default_factory=dict)
    degenerate: List[str] = field(default_factory=list)

    def select_columns(self, atoms: np.ndarray) -> np.ndarray:
        """Candidate-catalog atom matrix reduced to the pruned catalog's columns."""
        return atoms[:, self.kept_positions]


def choose_thresholds(
    net: RuleNetwork,
    candidates: AtomCatalog,
    medians: Mapping[str, float],
    degenerate_weight: float = 1e-3,
) -> ThresholdSelection:
    """
    Keep the best-scoring threshold atom per statistic.

    Ties go to the earliest candidate (the lowest threshold). When every
    candidate of a statistic stays below degenerate_weight the median
    candidate is kept instead and a warning is logged.

    Args:
        net: Network trained on the candidate catalog
        candidates: Catalog with several thresholds per statistic
        medians: 50th-percentile threshold per statistic
        degenerate_weight: Score under which a statistic counts as unused
    """
    scores = net.fuzzify().max(axis=0)
    by_source: Dict[str, List[int]] = {}
    for position, atom in enumerate(candidates):
        if atom.kind.is_stat_threshold:
            by_source.setdefault(atom.source, []).append(position)

    dropped = set()
    chosen: Dict[str, float] = {}
    degenerate: List[str] = []
    for source, positions in by_source.items():
        source_scores = scores[positions]
        best = positions[int(np.argmax(source_scores))]
        if source_scores.max() < degenerate_weight and source in medians:
            degenerate.append(source)
            best = next(
                (p for p in positions if candidates[p].threshold == medians[source]), best
            )
            logger.warning(
                f"All {source} candidates have fuzzy weight below {degenerate_weight}; "
                f"keeping the median threshold {candidates[best].threshold}"
            )
        chosen[source] = float(candidates[best].threshold)
        dropped.update(p for p in positions if p != best)
        logger.info(
            f"Selected {candidates[best].name} for {source} "
            f"(score {scores[best]:.3f} among {len(positions)} candidates)"
        )

    kept = [p for p in range(len(candidates)) if p not in dropped]
    return ThresholdSelection(
        catalog=candidates.subset(kept),
        kept_positions=kept,
        chosen=chosen,
        scores={candidates[p].name: float(scores[p]) for ps in by_source.values() for p in ps},
        degenerate=degenerate,
    )


def select_thresholds(
    train: LabeledAtoms,
    validation: Optional[LabeledAtoms],
    candidates: AtomCatalog,
    trainer: Trainer,
    medians: Mapping[str, float],
    degenerate_weight: float = 1e-3,
) -> ThresholdSelection:
    """Train on the candidate catalog, then choose one threshold per statistic."""
    net, _ = trainer(train, validation)
    return choose_thresholds(net, candidates, medians, degenerate_weight)


def select_threshold_atoms(
    train: LabeledAtoms,
    validation: Optional[LabeledAtoms],
    candidates: AtomCatalog,
    trainer: Trainer,
    medians: Optional[Mapping[str, float]] = None,
    degenerate_weight: float = 1e-3,
) -> AtomCatalog:
    """Pruned catalog keeping the best threshold atom of each statistic."""
    return select_thresholds(
        train, validation, candidates, trainer, medians or {}, degenerate_weight
    ).catalog

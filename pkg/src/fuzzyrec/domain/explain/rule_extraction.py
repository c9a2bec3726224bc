"""
Post-hoc rule extraction.

Atoms whose fuzzy weight is below a display threshold are left out of the
rendered horn clauses. Extraction only reads the network; predictions keep
using the full weight matrix.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from fuzzyrec.domain.atoms.models.catalog import AtomCatalog, short_name
from fuzzyrec.domain.exceptions.exception import ShapeMismatchError, ValidationException
from fuzzyrec.domain.network.models.rule_network import RuleNetwork

logger = logging.getLogger(__name__)

DISPLAY_THRESHOLD = 0.1
HEAD = "RELEVANT"


@dataclass(frozen=True)
class ExtractedRule:
    """One rule reduced to its displayed atoms.

    Attributes:
        rule_index: Row of the weight matrix
        atoms: (atom name, fuzzy weight) pairs at or above the threshold, weight descending
        full_weights: The whole fuzzy weight row
        threshold: Display threshold used
    """

    rule_index: int
    atoms: Tuple[Tuple[str, float], ...]
    full_weights: np.ndarray
    threshold: float = DISPLAY_THRESHOLD

    @property
    def is_vacuous(self) -> bool:
        return not self.atoms

    @property
    def atom_names(self) -> List[str]:
        return [name for name, _ in self.atoms]


AtomNames = Union[AtomCatalog, Sequence[str]]


def _names(catalog: AtomNames) -> List[str]:
    return catalog.names if isinstance(catalog, AtomCatalog) else list(catalog)


def extract_rules(
    net: RuleNetwork, catalog: AtomNames, threshold: float = DISPLAY_THRESHOLD
) -> List[ExtractedRule]:
    """
    Per rule, the atoms with W' >= threshold sorted by weight descending.

    Equal weights keep catalog order.

    Raises:
        ShapeMismatchError: If the catalog length differs from n
    """
    names = _names(catalog)
    if len(names) != net.n:
        raise ShapeMismatchError(f"catalog has {len(names)} atoms, network has {net.n}")
    if not 0.0 <= threshold <= 1.0:
        raise ValidationException(f"threshold must be in [0, 1], got {threshold}")
    W_fuzzy = net.fuzzify()
    rules = []
    for i, row in enumerate(W_fuzzy):
        keep = [j for j in np.argsort(-row, kind="stable") if row[j] >= threshold]
        rules.append(
            ExtractedRule(
                rule_index=i,
                atoms=tuple((names[j], float(row[j])) for j in keep),
                full_weights=row.copy(),
                threshold=threshold,
            )
        )
    return rules


def render_horn(rule: ExtractedRule, ascii: bool = False, short_names: bool = True) -> str:
    """
    Render a rule as `A ∧ B → RELEVANT` (or `A AND B -> RELEVANT`).

    Threshold suffixes such as ' (4.0+)' are dropped unless short_names is
    False. A vacuous rule renders as `TRUE -> RELEVANT` and logs a warning.
    """
    conjunction, arrow = (" AND ", " -> ") if ascii else (" ∧ ", " → ")
    if rule.is_vacuous:
        logger.warning(
            f"Rule {rule.rule_index + 1} has no atom with weight >= {rule.threshold}"
        )
        return f"TRUE -> {HEAD}" if ascii else f"TRUE → {HEAD}"
    names = [short_name(n) if short_names else n for n, _ in rule.atoms]
    return conjunction.join(names) + arrow + HEAD


def duplicate_rules(rules: Sequence[ExtractedRule]) -> List[List[int]]:
    """
    Groups of rule indices whose displayed bodies coincide.

    Reported only; duplicated rules are left in the network.
    """
    groups: Dict[frozenset, List[int]] = {}
    for rule in rules:
        if not rule.is_vacuous:
            groups.setdefault(frozenset(rule.atom_names), []).append(rule.rule_index)
    return [indices for indices in groups.values() if len(indices) > 1]


def weights_frame(net: RuleNetwork, catalog: AtomNames) -> pd.DataFrame:
    """k x n fuzzy weights with atom-name columns and R1..Rk rows."""
    names = _names(catalog)
    if len(names) != net.n:
        raise ShapeMismatchError(f"catalog has {len(names)} atoms, network has {net.n}")
    return pd.DataFrame(
        net.fuzzify(), columns=names, index=[f"R{i + 1}" for i in range(net.k)]
    ).rename_axis("rule")


@dataclass(frozen=True)
class WeightDistribution:
    """Box-plot summary of all fuzzy weights.

    Whiskers reach the most extreme weights within 1.5 IQR of the quartiles;
    weights beyond them are outliers.
    """

    count: int
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    lower_whisker: float
    upper_whisker: float
    outliers: Tuple[float, ...]
    share_below_threshold: float

    def rows(self) -> List[Tuple[str, float]]:
        return [
            ("count", float(self.count)),
            ("min", self.minimum),
            ("q1", self.q1),
            ("median", self.median),
            ("q3", self.q3),
            ("max", self.maximum),
            ("lower_whisker", self.lower_whisker),
            ("upper_whisker", self.upper_whisker),
            ("n_outliers", float(len(self.outliers))),
            ("share_below_threshold", self.share_below_threshold),
        ]


def weight_distribution(
    net: RuleNetwork, threshold: float = DISPLAY_THRESHOLD
) -> WeightDistribution:
    """Quartiles, whiskers and outliers of the k*n fuzzy weights, and the share below threshold."""
    weights = np.sort(net.fuzzify().ravel())
    q1, median, q3 = np.percentile(weights, [25, 50, 75])
    iqr = q3 - q1
    inside = weights[(weights >= q1 - 1.5 * iqr) & (weights <= q3 + 1.5 * iqr)]
    return WeightDistribution(
        count=int(weights.size),
        minimum=float(weights[0]),
        q1=float(q1),
        median=float(median),
        q3=float(q3),
        maximum=float(weights[-1]),
        lower_whisker=float(inside.min()),
        upper_whisker=float(inside.max()),
        outliers=tuple(float(w) for w in weights if w < inside.min() or w > inside.max()),
        share_below_threshold=float(np.mean(weights < threshold)),
    )

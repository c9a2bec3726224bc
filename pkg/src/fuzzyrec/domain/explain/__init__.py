"""Rule extraction and weight summaries."""

from .rule_extraction import (
    DISPLAY_THRESHOLD,
    ExtractedRule,
    WeightDistribution,
    duplicate_rules,
    extract_rules,
    render_horn,
    weight_distribution,
    weights_frame,
)

__all__ = [
    "DISPLAY_THRESHOLD",
    "ExtractedRule",
    "WeightDistribution",
    "extract_rules",
    "render_horn",
    "duplicate_rules",
    "weights_frame",
    "weight_distribution",
]

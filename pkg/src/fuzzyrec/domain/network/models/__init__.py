"""Rule network models."""

from .rule_network import ForwardTrace, Gradient, RuleNetwork, sigmoid

__all__ = ["RuleNetwork", "ForwardTrace", "Gradient", "sigmoid"]

"""Domain layer - fuzzy algebra, rule networks, atoms, data and evaluation."""

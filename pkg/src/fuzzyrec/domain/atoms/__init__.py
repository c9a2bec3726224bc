"""Human-readable propositional atoms."""

"""Rule network training."""

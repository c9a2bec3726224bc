"""Top-k ranking evaluation."""

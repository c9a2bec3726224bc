"""Utility functions for fuzzyrec."""

from .gradcheck import GradcheckResult, run_gradcheck
from .run_logging import RunLogger, configure_logging

__all__ = ["GradcheckResult", "run_gradcheck", "RunLogger", "configure_logging"]

"""
Logging setup and the per-run log file.
"""

import logging
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

from rich.console import Console
from rich.logging import RichHandler


def configure_logging(verbose: bool = False, console: Optional[Console] = None) -> None:
    """Route library logging through a RichHandler (DEBUG when verbose, else INFO)."""
    handler = RichHandler(console=console, show_path=False, rich_tracebacks=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    root = logging.getLogger("fuzzyrec")
    for existing in list(root.handlers):
        if isinstance(existing, RichHandler):
            root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


class RunLogger:
    """Appends timestamped, sectioned records to <out-dir>/run.log."""

    def __init__(self, log_file: Union[str, Path]):
        self.log_file = Path(log_file)
        self.start_time = datetime.now()

        # Create log directory if needed
        self.log_file.parent.mkdir(parents=True, exist_ok=True)

    def log(self, section: str, content: str) -> None:
        """Log a section with timestamp."""
        timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        elapsed = (datetime.now() - self.start_time).total_seconds()

        with open(self.log_file, "a", encoding="utf-8") as f:
            f.write(f"\n{'=' * 80}\n")
            f.write(f"[{timestamp}] [{elapsed:.2f}s] {section}\n")
            f.write(f"{'=' * 80}\n")
            f.write(f"{content}\n")

    def attach(self, level: int = logging.INFO) -> logging.Handler:
        """Also copy fuzzyrec log records into the run log."""
        handler = logging.FileHandler(self.log_file, encoding="utf-8")
        handler.setLevel(level)
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        logging.getLogger("fuzzyrec").addHandler(handler)
        return handler

    def detach(self, handler: logging.Handler) -> None:
        logging.getLogger("fuzzyrec").removeHandler(handler)
        handler.close()

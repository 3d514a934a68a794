"""Logging helpers for Seedwave.

Provides `Loggable`, a small base class that gives each solver, simulator and
experiment a class-scoped logger named `<module>.<ClassName>`, and
`setup_logging()`, the single place where the root logger is configured.
"""

import logging

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class Loggable:
    """Mixin providing a class-scoped logger.

    Subclass to get `self.logger` configured to the fully qualified class
    name, e.g., `seedwave.pde.solver.FrontSolver`.
    """

    def __init__(self):
        """Initialize the logger for the subclass instance."""
        self.logger = logging.getLogger(
            f"{self.__class__.__module__}.{self.__class__.__name__}"
        )


def setup_logging(level: str = "INFO") -> None:
    """Configure root logging for command-line runs.

    Args:
        level: Standard level name ("DEBUG", "INFO", ...).
    """
    # force rebinds the handler to the current stderr on repeated calls
    logging.basicConfig(level=getattr(logging, level.upper()), format=LOG_FORMAT, force=True)

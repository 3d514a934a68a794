"""Experiment base interfaces.

- `ExperimentMetadata`: descriptor used by the catalog for listing and
  lookup.
- `BaseExperiment`: a named, reproducible run binding the wave-speed, PDE
  and particle layers. Subclasses implement `run()` and fill a report; the
  base class handles quick-mode scaling, output files and logging.
"""

from __future__ import annotations

import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from ..base.loggable import Loggable
from ..config.settings import Settings
from .report import ExperimentReport, write_table


@dataclass
class ExperimentMetadata:
    """Catalog entry of an experiment.

    Args:
        name: Unique name used on the command line.
        anchor: The published result the experiment checks.
        description: One-line summary.
        tags: Free-form labels ("analytic", "pde", "monte-carlo", ...).
        slow: True when a full run takes minutes.
    """

    name: str
    anchor: str
    description: str
    tags: List[str] = field(default_factory=list)
    slow: bool = False

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise ValueError("Experiment name cannot be empty")
        if any(ch.isspace() for ch in self.name):
            raise ValueError(f"Experiment name must not contain whitespace: {self.name!r}")
        if not self.anchor.strip():
            raise ValueError(f"Experiment {self.name} needs an anchor")


class BaseExperiment(Loggable, ABC):
    """Base class of catalog experiments.

    Args:
        settings: Numerical defaults (seed, threads, caps, quick-mode factors).
        quick: Reduce horizons, replicates and PDE resolution; tolerances are relaxed
            by ``settings.quick_tolerance_multiplier``.
        output_dir: Root output directory; the experiment writes into its own
            sub-directory. Nothing is written when omitted.
    """

    def __init__(
        self,
        settings: Optional[Settings] = None,
        quick: bool = False,
        output_dir: Optional[str] = None,
    ):
        super().__init__()
        self.settings = settings or Settings()
        self.quick = quick
        self.output_dir = Path(output_dir) if output_dir else None
        self.seed = self.settings.default_seed
        self._report: Optional[ExperimentReport] = None

    @staticmethod
    @abstractmethod
    def get_metadata() -> ExperimentMetadata:
        """Return the catalog entry of this experiment."""
        pass

    @abstractmethod
    def run(self, report: ExperimentReport) -> None:
        """Compute metrics and artifacts into ``report``."""
        pass

    def describe_params(self) -> Dict[str, Any]:
        """Configuration echoed at the top of the report and CSV headers."""
        return {"seed": self.seed, "quick": self.quick}

    @property
    def name(self) -> str:
        return self.get_metadata().name

    def replicates(self, full: int) -> int:
        """Replicate budget, reduced in quick mode."""
        if not self.quick:
            return full
        return max(30, full // self.settings.quick_factor)

    def horizon(self, full: float, minimum: float = 0.0) -> float:
        """Time horizon, divided by ``quick_factor`` in quick mode but kept at least ``minimum``."""
        if not self.quick:
            return full
        return max(minimum, full / self.settings.quick_factor)

    def pde_dx(self, full: Optional[float] = None) -> float:
        """Grid spacing, coarsened by two in quick mode."""
        dx = full if full is not None else self.settings.pde_dx
        return 2.0 * dx if self.quick else dx

    def write_csv(self, filename: str, frame: pd.DataFrame) -> Optional[Path]:
        """Write an artifact into the experiment directory and register it."""
        if self.output_dir is None:
            return None
        from .. import __version__

        header = [f"# seedwave_version={__version__}", f"# experiment={self.name}"]
        header += [f"# {key}={value}" for key, value in self.describe_params().items()]
        path = write_table(
            frame,
            self.output_dir / self.name / filename,
            header,
            self.settings.float_format,
        )
        if self._report is not None:
            self._report.artifacts.append(str(path))
        return path

    def execute(self) -> ExperimentReport:
        """Run the experiment and return its report (never raises on failed metrics)."""
        report = ExperimentReport(
            name=self.name,
            params=self.describe_params(),
            quick=self.quick,
            tolerance_multiplier=(
                self.settings.quick_tolerance_multiplier if self.quick else 1.0
            ),
        )
        self._report = report
        self.logger.info(f"Running experiment {self.name}{' (quick)' if self.quick else ''}")
        started = time.perf_counter()
        try:
            self.run(report)
            report.elapsed = time.perf_counter() - started
            self.write_csv("metrics.csv", report.to_frame())
        finally:
            self._report = None
        for metric in report.metrics:
            if metric.passed:
                self.logger.info(metric.describe())
            elif metric.advisory:
                self.logger.warning(metric.describe())
            else:
                self.logger.error(metric.describe())
        self.logger.info(
            f"Experiment {self.name}: {'PASS' if report.passed else 'FAIL'} "
            f"in {report.elapsed:.2f}s"
        )
        return report

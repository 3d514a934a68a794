"""Experiment catalog.

Registers experiment classes by name, runs them (alone or concurrently) and
tracks which ones passed and which failed.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Set, Type

from ..base.loggable import Loggable
from ..config.settings import Settings
from ..core.errors import ConfigurationError
from .base import BaseExperiment, ExperimentMetadata
from .report import ExperimentReport


class ExperimentCatalog(Loggable):
    """Name-indexed registry of `BaseExperiment` subclasses.

    Responsibilities:
    - Register experiment classes and reject duplicate names
    - Describe the catalog for ``verify --list``
    - Run experiments and record passed/failed names
    """

    def __init__(self, settings: Optional[Settings] = None):
        super().__init__()
        self.settings = settings or Settings()
        self.experiments: Dict[str, Type[BaseExperiment]] = {}
        self.metadata: Dict[str, ExperimentMetadata] = {}
        self.passed_experiments: Set[str] = set()
        self.failed_experiments: Set[str] = set()

    def register(self, experiment_cls: Type[BaseExperiment]) -> Type[BaseExperiment]:
        """Add an experiment class; usable as a class decorator."""
        metadata = experiment_cls.get_metadata()
        if metadata.name in self.experiments:
            raise ConfigurationError(f"Experiment {metadata.name!r} is already registered")
        self.experiments[metadata.name] = experiment_cls
        self.metadata[metadata.name] = metadata
        self.logger.debug(f"Registered experiment {metadata.name}")
        return experiment_cls

    def get(self, name: str) -> Type[BaseExperiment]:
        try:
            return self.experiments[name]
        except KeyError:
            known = ", ".join(self.names())
            raise ConfigurationError(f"Unknown experiment {name!r}; known: {known}") from None

    def names(self) -> List[str]:
        return list(self.experiments)

    def describe(self) -> List[str]:
        """One line per experiment: name, anchor and a slow marker."""
        width = max((len(name) for name in self.names()), default=0)
        return [
            f"{meta.name:<{width}}  {meta.anchor}{'  [slow]' if meta.slow else ''}"
            for meta in self.metadata.values()
        ]

    def run(
        self,
        name: str,
        quick: bool = False,
        output_dir: Optional[str] = None,
        strict: bool = False,
    ) -> ExperimentReport:
        """Run one experiment.

        Args:
            name: Registered experiment name.
            quick: Reduced budgets and relaxed tolerances.
            output_dir: Root directory for CSV artifacts.
            strict: Raise `ExperimentFailure` when a required metric fails.

        Returns:
            ExperimentReport: The completed report.
        """
        experiment = self.get(name)(self.settings, quick, output_dir)
        report = experiment.execute()
        if report.passed:
            self.passed_experiments.add(name)
            self.failed_experiments.discard(name)
        else:
            self.failed_experiments.add(name)
            self.passed_experiments.discard(name)
        if strict:
            report.raise_for_failures()
        return report

    def run_many(
        self,
        names: Optional[Iterable[str]] = None,
        quick: bool = False,
        output_dir: Optional[str] = None,
        threads: int = 1,
    ) -> List[ExperimentReport]:
        """Run several experiments, concurrently when ``threads > 1``.

        Reports come back in the requested order.
        """
        selected = list(names) if names is not None else self.names()
        for name in selected:
            self.get(name)
        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            reports = list(pool.map(lambda n: self.run(n, quick, output_dir), selected))
        self.logger.info(
            f"Ran {len(reports)} experiment(s): {len(self.passed_experiments)} passed, "
            f"{len(self.failed_experiments)} failed"
        )
        return reports


def default_catalog(settings: Optional[Settings] = None) -> ExperimentCatalog:
    """Catalog holding every built-in experiment."""
    from .experiments import ALL_EXPERIMENTS

    catalog = ExperimentCatalog(settings)
    for experiment_cls in ALL_EXPERIMENTS:
        catalog.register(experiment_cls)
    return catalog

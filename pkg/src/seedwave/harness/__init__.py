"""Experiment harness.

Exposes:
- `ExperimentReport`, `Metric`, `Provenance`, `write_table`: reporting
- `BaseExperiment`, `ExperimentMetadata`: experiment interface
- `ExperimentCatalog`, `default_catalog`: registry and runner
- ``exp_*`` helpers for single configured runs
"""

from .base import BaseExperiment, ExperimentMetadata
from .experiments import (
    ALL_EXPERIMENTS,
    SweepScenario,
    exp_duality,
    exp_figure_sweeps,
    exp_martingale,
    exp_ordering,
    exp_supercritical_wave,
)
from .manager import ExperimentCatalog, default_catalog
from .report import Comparison, ExperimentReport, Metric, Provenance, write_table

__all__ = [
    "ALL_EXPERIMENTS",
    "BaseExperiment",
    "Comparison",
    "ExperimentCatalog",
    "ExperimentMetadata",
    "ExperimentReport",
    "Metric",
    "Provenance",
    "SweepScenario",
    "default_catalog",
    "exp_duality",
    "exp_figure_sweeps",
    "exp_martingale",
    "exp_ordering",
    "exp_supercritical_wave",
    "write_table",
]

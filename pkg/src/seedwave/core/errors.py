"""Error hierarchy shared by every Seedwave layer.

All errors derive from `SeedwaveError` so callers (the CLI in particular) can
catch library failures in one place. Errors that describe bad input also
derive from `ValueError`.
"""

from __future__ import annotations

from typing import Any, Dict, Optional, Sequence


class SeedwaveError(Exception):
    """Base class for all Seedwave errors."""


class DomainError(SeedwaveError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(SeedwaveError, ValueError):
    """Numerical or command-line configuration is inconsistent."""


class NonRealSpeedError(SeedwaveError):
    """The radicand of the speed function is negative at the requested decay rate."""

    def __init__(self, mu: float, radicand: float):
        self.mu = mu
        self.radicand = radicand
        super().__init__(f"Negative radicand {radicand:.6g} at mu={mu:.6g}")


class SolverError(SeedwaveError):
    """The critical-speed minimizer could not bracket a minimum."""

    def __init__(self, message: str, scan: Optional[Dict[str, Sequence[float]]] = None):
        self.scan = scan or {}
        super().__init__(message)


class DivergenceError(SeedwaveError):
    """A time integration produced non-finite values."""

    def __init__(self, step: int, t: float):
        self.step = step
        self.t = t
        super().__init__(f"Non-finite values at step {step} (t={t:.6g})")


class NotBracketedError(SeedwaveError):
    """A field component never crosses the requested level inside the grid."""

    def __init__(self, level: float, component: str):
        self.level = level
        self.component = component
        super().__init__(f"Component {component!r} does not cross level {level}")


class InsufficientSamplesError(SeedwaveError):
    """Too few usable points for a least-squares estimate."""

    def __init__(self, count: int, required: int, what: str = "samples"):
        self.count = count
        self.required = required
        super().__init__(f"Need at least {required} {what}, got {count}")


class PopulationOverflowError(SeedwaveError):
    """A particle simulation exceeded its population cap."""

    def __init__(self, time_reached: float, size: int, cap: int):
        self.time_reached = time_reached
        self.size = size
        self.cap = cap
        super().__init__(
            f"Population {size} exceeded cap {cap} before t={time_reached:.6g}"
        )


class ExperimentFailure(SeedwaveError):
    """One or more required metrics of an experiment failed."""

    def __init__(self, name: str, failed: Sequence[str], report: Any = None):
        self.name = name
        self.failed = list(failed)
        self.report = report
        super().__init__(f"Experiment {name!r} failed: {', '.join(self.failed)}")

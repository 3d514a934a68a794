"""Experiment reports: metrics with explicit tolerances and provenance.

Every metric compares a measured value against a target with a tolerance
and records where the target comes from. Advisory metrics are reported but
never fail an experiment.
"""

from __future__ import annotations

import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd
from pydantic import BaseModel, Field

from ..core.errors import ExperimentFailure


class Provenance(str, Enum):
    """Where a target value comes from."""

    PUBLISHED = "published"
    DERIVED = "derived"
    TRIVIAL = "trivial"


class Comparison(str, Enum):
    ABS = "abs"
    REL = "rel"
    AT_MOST = "at_most"
    AT_LEAST = "at_least"


class Metric(BaseModel):
    """One checked quantity.

    Attributes:
        label: Short identifier, unique within a report.
        value: Measured value.
        target: Reference value or bound.
        tolerance: Allowed deviation; relative for ``Comparison.REL``.
        comparison: How value, target and tolerance are combined.
        provenance: Origin of the target.
        advisory: Reported only; never fails the experiment.
    """

    label: str
    value: float
    target: float
    tolerance: float = Field(ge=0.0)
    comparison: Comparison = Comparison.ABS
    provenance: Provenance = Provenance.DERIVED
    advisory: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        if self.comparison is Comparison.ABS:
            return abs(self.value - self.target) <= self.tolerance
        if self.comparison is Comparison.REL:
            return abs(self.value - self.target) <= self.tolerance * abs(self.target)
        if self.comparison is Comparison.AT_MOST:
            return self.value <= self.target + self.tolerance
        return self.value >= self.target - self.tolerance

    def describe(self) -> str:
        symbol = {
            Comparison.ABS: f"= {self.target:.12g} +- {self.tolerance:.3g}",
            Comparison.REL: f"= {self.target:.12g} +- {100 * self.tolerance:.3g}%",
            Comparison.AT_MOST: f"<= {self.target:.12g} (+{self.tolerance:.3g})",
            Comparison.AT_LEAST: f">= {self.target:.12g} (-{self.tolerance:.3g})",
        }[self.comparison]
        status = "PASS" if self.passed else ("WARN" if self.advisory else "FAIL")
        note = f"  [{self.note}]" if self.note else ""
        return (
            f"{status:4s} {self.label}: {self.value:.12g} {symbol} "
            f"({self.provenance.value}){note}"
        )


class ExperimentReport(BaseModel):
    """Metrics and artifacts of one experiment run."""

    name: str
    params: Dict[str, Any] = Field(default_factory=dict)
    metrics: List[Metric] = Field(default_factory=list)
    artifacts: List[str] = Field(default_factory=list)
    quick: bool = False
    tolerance_multiplier: float = 1.0
    elapsed: float = 0.0

    def add(
        self,
        label: str,
        value: float,
        target: float,
        tolerance: float,
        comparison: Union[Comparison, str] = Comparison.ABS,
        provenance: Union[Provenance, str] = Provenance.DERIVED,
        advisory: bool = False,
        note: str = "",
        scale: bool = True,
    ) -> Metric:
        """Append a metric; ``scale`` applies the quick-mode tolerance multiplier."""
        metric = Metric(
            label=label,
            value=float(value),
            target=float(target),
            tolerance=tolerance * (self.tolerance_multiplier if scale else 1.0),
            comparison=Comparison(comparison),
            provenance=Provenance(provenance),
            advisory=advisory,
            note=note,
        )
        self.metrics.append(metric)
        return metric

    def close(
        self, label: str, value: float, target: float, tolerance: float, **kw
    ) -> Metric:
        return self.add(label, value, target, tolerance, Comparison.ABS, **kw)

    def relative(
        self, label: str, value: float, target: float, tolerance: float, **kw
    ) -> Metric:
        return self.add(label, value, target, tolerance, Comparison.REL, **kw)

    def at_most(
        self, label: str, value: float, bound: float, tolerance: float = 0.0, **kw
    ) -> Metric:
        return self.add(label, value, bound, tolerance, Comparison.AT_MOST, **kw)

    def at_least(
        self, label: str, value: float, bound: float, tolerance: float = 0.0, **kw
    ) -> Metric:
        return self.add(label, value, bound, tolerance, Comparison.AT_LEAST, **kw)

    def within(self, label: str, value: float, lo: float, hi: float, **kw) -> Metric:
        """Interval check expressed as a centered absolute tolerance."""
        return self.add(label, value, 0.5 * (lo + hi), 0.5 * (hi - lo), Comparison.ABS, **kw)

    def holds(self, label: str, condition: bool, **kw) -> Metric:
        """Boolean property recorded as ``1`` (holds) against target ``1``."""
        return self.add(
            label, 1.0 if condition else 0.0, 1.0, 0.0, Comparison.ABS, scale=False, **kw
        )

    @property
    def failed_metrics(self) -> List[Metric]:
        return [m for m in self.metrics if not m.passed and not m.advisory]

    @property
    def passed(self) -> bool:
        return not self.failed_metrics

    def raise_for_failures(self) -> None:
        """Raise `ExperimentFailure` if a required metric failed."""
        failed = self.failed_metrics
        if failed:
            raise ExperimentFailure(self.name, [m.label for m in failed], self)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "label": m.label,
                "value": m.value,
                "target": m.target,
                "tolerance": m.tolerance,
                "comparison": m.comparison.value,
                "provenance": m.provenance.value,
                "advisory": m.advisory,
                "passed": m.passed,
            }
            for m in self.metrics
        ]
        return pd.DataFrame(
            rows,
            columns=[
                "label",
                "value",
                "target",
                "tolerance",
                "comparison",
                "provenance",
                "advisory",
                "passed",
            ],
        )

    def render(self) -> str:
        """Plain-text report."""
        mode = " (quick)" if self.quick else ""
        lines = [f"== {self.name}{mode}: {'PASS' if self.passed else 'FAIL'}"]
        for key, value in self.params.items():
            lines.append(f"   {key} = {value}")
        lines.extend(f"   {m.describe()}" for m in self.metrics)
        lines.extend(f"   -> {path}" for path in self.artifacts)
        lines.append(f"   elapsed {self.elapsed:.2f}s")
        return "\n".join(lines)


def write_table(
    frame: pd.DataFrame,
    path: Union[str, Path],
    header_lines: Optional[Sequence[str]] = None,
    float_format: str = "%.12g",
) -> Path:
    """Write ``frame`` as CSV preceded by ``# key=value`` comment lines.

    Uses a dot decimal separator and the frame's column order.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        for line in header_lines or []:
            handle.write(line if line.startswith("#") else f"# {line}")
            handle.write("\n")
        frame.to_csv(handle, index=False, float_format=float_format, lineterminator="\n")
    return path

"""Critical wave-speed: minimizing the speed function over ``mu < 0``.

The speed function is smooth, tends to infinity at both ends of the negative
half axis and has a unique minimum, so a coarse log-spaced scan brackets it,
golden-section search refines it and a root solve of the closed-form
derivative polishes the argmin.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import brentq, minimize_scalar

from ..core.errors import NonRealSpeedError, SeedwaveError, SolverError
from ..core.model import ModelParams, Variant
from .speed import (
    determinant_poly,
    perron_eigenvector,
    radicand,
    speed_derivative,
    speed_function,
)

logger = logging.getLogger(__name__)

SCAN_LO = -64.0
SCAN_HI = -1e-6
SCAN_POINTS = 256
GOLDEN_TOL = 1e-10
CERTIFICATE_STEP = 1e-4

SWEEP_COLUMNS = [
    "axis",
    "value",
    "lambda_classical",
    "lambda_seedbank",
    "lambda_spore",
    "mu_classical",
    "mu_seedbank",
    "mu_spore",
]


@dataclass(frozen=True)
class CriticalSpeed:
    """Minimum of the speed function with solver diagnostics.

    Fields:
    - mu_star: Critical decay rate.
    - lambda_star: Critical wave-speed ``lambda_plus(mu_star)``.
    - det_residual: ``|P(mu_star, lambda_star)|``.
    - eigvec: Perron eigenvector ``(d1, d2)`` at ``mu_star``.
    - bracket: Scan bracket ``(lo, hi)`` that contained the minimum.
    - variant: Model the minimum belongs to.
    """

    mu_star: float
    lambda_star: float
    det_residual: float
    eigvec: Tuple[float, float]
    bracket: Tuple[float, float]
    variant: Variant
    excluded_points: int = 0

    @property
    def log_lag(self) -> float:
        """Coefficient ``3 / (2 |mu*|)`` of the ``log t`` delay of fronts from compact data."""
        return 1.5 / abs(self.mu_star)

    def certificate(self, params: ModelParams, step: float = CERTIFICATE_STEP) -> bool:
        """Local-minimum certificate: neighbours at ``mu* +- step`` are not lower."""
        left = speed_function(self.mu_star - step, params).lambda_plus
        right = speed_function(self.mu_star + step, params).lambda_plus
        return min(left, right) >= self.lambda_star - 1e-12


def _scan(params: ModelParams, points: int) -> Tuple[np.ndarray, np.ndarray, int]:
    mus = -np.logspace(math.log10(-SCAN_LO), math.log10(-SCAN_HI), points)
    lams = np.full(points, np.nan)
    excluded = 0
    for i, mu in enumerate(mus):
        try:
            lams[i] = speed_function(float(mu), params).lambda_plus
        except NonRealSpeedError as e:
            excluded += 1
            logger.warning(f"Excluded mu={mu:.6g} from scan: radicand {e.radicand:.3g}")
    return mus, lams, excluded


def critical_speed(params: ModelParams, scan_points: int = SCAN_POINTS) -> CriticalSpeed:
    """Locate the unique minimum of ``mu -> lambda_plus(mu)`` on ``mu < 0``.

    Args:
        params: Model parameters (effective selection must be positive).
        scan_points: Size of the log-spaced bracketing scan on [-64, -1e-6].

    Returns:
        `CriticalSpeed` with eigenvector and determinant residual filled in.

    Raises:
        SolverError: If the scan minimum sits on the scan boundary, i.e. the
            numerical derivative never changes sign. The scan trace is attached.
    """
    mus, lams, excluded = _scan(params, scan_points)
    trace = {"mu": mus.tolist(), "lambda": lams.tolist()}
    if np.all(np.isnan(lams)):
        raise SolverError("Speed function is non-real on the whole scan", trace)

    i = int(np.nanargmin(lams))
    if i == 0 or i == len(mus) - 1 or np.isnan(lams[i - 1]) or np.isnan(lams[i + 1]):
        raise SolverError(
            f"No interior minimum on [{SCAN_LO}, {SCAN_HI}] (scan argmin at index {i})",
            trace,
        )
    lo, mid, hi = float(mus[i - 1]), float(mus[i]), float(mus[i + 1])

    def objective(mu: float) -> float:
        return speed_function(mu, params).lambda_plus

    golden = minimize_scalar(
        objective, bracket=(lo, mid, hi), method="golden", tol=GOLDEN_TOL
    )
    mu_star = float(golden.x)

    d_lo, d_hi = speed_derivative(lo, params), speed_derivative(hi, params)
    if d_lo < 0.0 < d_hi:
        mu_star = brentq(
            lambda mu: speed_derivative(mu, params), lo, hi, xtol=1e-14
        )
    else:
        logger.debug(
            f"Derivative polish skipped (d_lo={d_lo:.3g}, d_hi={d_hi:.3g}); "
            f"using golden-section argmin"
        )

    lambda_star = speed_function(mu_star, params).lambda_plus
    result = CriticalSpeed(
        mu_star=mu_star,
        lambda_star=lambda_star,
        det_residual=abs(determinant_poly(mu_star, lambda_star, params)),
        eigvec=perron_eigenvector(mu_star, params),
        bracket=(lo, hi),
        variant=params.variant,
        excluded_points=excluded,
    )
    logger.debug(
        f"critical_speed[{params.variant.value}]: mu*={mu_star:.12g}, "
        f"lambda*={lambda_star:.12g}, bracket=({lo:.4g}, {hi:.4g})"
    )
    return result


class SweepAxis(str, Enum):
    """Parameter varied by `sweep_critical`."""

    S = "s"
    C = "c"
    C_PRIME = "c_prime"
    C_EQUALS_C_PRIME = "c_equals_c_prime"


def _params_at(base: ModelParams, axis: SweepAxis, value: float) -> ModelParams:
    if axis is SweepAxis.S:
        return base.with_selection(value)
    if axis is SweepAxis.C:
        return base.with_rates(c=value)
    if axis is SweepAxis.C_PRIME:
        return base.with_rates(c_prime=value)
    return base.with_rates(c=value, c_prime=value)


def _sweep_row(base: ModelParams, axis: SweepAxis, value: float) -> Dict[str, object]:
    row: Dict[str, object] = {"axis": axis.value, "value": value}
    errors: List[str] = []
    try:
        point = _params_at(base, axis, value)
    except (SeedwaveError, ValueError) as e:
        point = None
        errors.append(str(e))
    for variant in (Variant.CLASSICAL, Variant.SEED_BANK, Variant.SPORE):
        row[f"lambda_{variant.value}"] = math.nan
        row[f"mu_{variant.value}"] = math.nan
        if point is None:
            continue
        try:
            crit = critical_speed(point.as_variant(variant))
            row[f"lambda_{variant.value}"] = crit.lambda_star
            row[f"mu_{variant.value}"] = crit.mu_star
        except SeedwaveError as e:
            errors.append(f"{variant.value}: {e}")
    row["error"] = "; ".join(errors)
    return row


def sweep_critical(
    params_base: ModelParams,
    axis: Union[SweepAxis, str],
    grid: Sequence[float],
    threads: int = 1,
) -> pd.DataFrame:
    """Critical speeds of all three models along one parameter axis.

    Args:
        params_base: Rates and offspring law held fixed; its variant is ignored.
        axis: Parameter to vary.
        grid: Positive axis values.
        threads: Worker threads; row order is always the grid order.

    Returns:
        DataFrame with `SWEEP_COLUMNS` plus an ``error`` column recording
        per-row solver failures.
    """
    axis = SweepAxis(axis)
    base = params_base.as_variant(Variant.SEED_BANK)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        rows = list(pool.map(lambda v: _sweep_row(base, axis, float(v)), grid))
    frame = pd.DataFrame(rows, columns=SWEEP_COLUMNS + ["error"])
    failed = int((frame["error"] != "").sum())
    if failed:
        logger.warning(f"Sweep along {axis.value}: {failed} row(s) recorded errors")
    return frame


def scan_trace(params: ModelParams, points: int = SCAN_POINTS) -> Dict[str, List[float]]:
    """Scan of the speed function used for bracketing (for reports and plots)."""
    mus, lams, _ = _scan(params, points)
    return {
        "mu": mus.tolist(),
        "lambda": lams.tolist(),
        "radicand": [radicand(float(m), params) for m in mus],
    }

"""Front tracking and wave measurements on computed fields.

Exposes:
- `front_position`: leftmost level crossing by linear interpolation
- `front_speed`: least-squares slope of a front trace over a time window,
  optionally net of a logarithmic delay
- `tail_decay_rate`: exponential decay rate of ``1 - u`` ahead of the front
- `comoving_profile`: profile on a grid relative to a front position
- `is_monotone`: nondecreasing check for both components
"""

from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.stats import linregress

from ..core.errors import DomainError, InsufficientSamplesError, NotBracketedError
from .grid import COMPONENTS, FieldPair, FrontTrace

logger = logging.getLogger(__name__)

MIN_SPEED_SAMPLES = 8
MIN_TAIL_POINTS = 3


def front_position(field: FieldPair, level: float = 0.5, component: str = "u") -> float:
    """Leftmost crossing of ``level`` by one component.

    Args:
        field: Field to inspect.
        level: Threshold in (0, 1).
        component: ``"u"`` or ``"v"``.

    Returns:
        Crossing location, linearly interpolated between the bracketing
        grid points.

    Raises:
        NotBracketedError: If the component never crosses the level.
    """
    values = field.component(component)
    below = values < level
    flips = np.flatnonzero(below[:-1] != below[1:])
    if flips.size == 0:
        raise NotBracketedError(level, component)
    i = int(flips[0])
    w0, w1 = values[i], values[i + 1]
    x0 = field.grid.x0 + i * field.grid.dx
    return float(x0 + (level - w0) / (w1 - w0) * field.grid.dx)


def front_speed(
    trace: FrontTrace,
    window: Optional[Tuple[float, float]] = None,
    log_lag: float = 0.0,
) -> Tuple[float, float]:
    """Least-squares front speed over a time window.

    Fronts started from compactly supported data trail ``lambda* t`` by a
    term growing like ``log t``. With ``log_lag = k`` the fitted model is
    ``x(t) = lambda t - k log t + b``, i.e. the slope of ``x(t) + k log t``;
    ``log_lag = 0`` is the plain slope.

    Args:
        trace: Sampled front positions.
        window: Closed time interval ``(t_lo, t_hi)``; whole trace if omitted.
        log_lag: Known coefficient ``k`` of the logarithmic delay.

    Returns:
        ``(slope, stderr)`` where ``stderr`` is the residual-based standard
        error of the slope.

    Raises:
        InsufficientSamplesError: Fewer than 8 finite samples in the window.
        DomainError: ``log_lag`` is nonzero and the window holds ``t <= 0``.
    """
    times, positions = trace.as_arrays()
    mask = np.isfinite(positions)
    if window is not None:
        mask &= (times >= window[0]) & (times <= window[1])
    count = int(mask.sum())
    if count < MIN_SPEED_SAMPLES:
        raise InsufficientSamplesError(count, MIN_SPEED_SAMPLES, "front samples")
    t, x = times[mask], positions[mask]
    if log_lag != 0.0:
        if np.any(t <= 0.0):
            raise DomainError(f"Logarithmic lag needs positive times, window starts at {t[0]}")
        x = x + log_lag * np.log(t)
    fit = linregress(t, x)
    return float(fit.slope), float(fit.stderr)


def tail_decay_rate(
    field: FieldPair, component: str = "u", fit_range: Tuple[float, float] = (5.0, 25.0)
) -> float:
    """Slope of ``log(1 - w)`` against ``x`` over ``fit_range``.

    Raises:
        InsufficientSamplesError: If the range holds fewer than three grid
            points or ``1 - w`` is not strictly positive on it.
    """
    x = field.grid.x
    mask = (x >= fit_range[0]) & (x <= fit_range[1])
    tail = 1.0 - field.component(component)[mask]
    if tail.size < MIN_TAIL_POINTS:
        raise InsufficientSamplesError(int(tail.size), MIN_TAIL_POINTS, "tail points")
    if np.any(tail <= 0.0):
        raise InsufficientSamplesError(
            int(np.sum(tail > 0.0)), int(tail.size), "positive tail values"
        )
    if np.any(np.diff(tail) > 0.0):
        logger.warning(f"Tail of {component} is not decreasing on {fit_range}")
    return float(linregress(x[mask], np.log(tail)).slope)


def comoving_profile(
    field: FieldPair,
    center: float,
    window: Tuple[float, float] = (-20.0, 20.0),
    component: str = "u",
) -> Tuple[np.ndarray, np.ndarray]:
    """Profile at offsets ``window[0] .. window[1]`` from ``center``.

    Offsets use the field's grid spacing so profiles of different runs on the
    same spacing can be compared pointwise.
    """
    dx = field.grid.dx
    offsets = np.arange(window[0], window[1] + 0.5 * dx, dx)
    values = np.interp(center + offsets, field.grid.x, field.component(component))
    return offsets, values


def is_monotone(field: FieldPair, tol: float = 1e-12) -> bool:
    """True when both components are nondecreasing in ``x`` up to ``tol``."""
    return all(bool(np.all(np.diff(field.component(c)) >= -tol)) for c in COMPONENTS)

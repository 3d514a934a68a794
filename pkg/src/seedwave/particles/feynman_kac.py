"""Single-path on/off Brownian motion and its Feynman-Kac estimator.

A single (non-branching) path switches active -> dormant at rate ``c`` and
back at rate ``c'``. Its displacement over ``[0, t]`` is Gaussian with
variance equal to the time spent in the mobile state, so only the
occupation time has to be simulated.
"""

from __future__ import annotations

import logging
from typing import Callable, Tuple, Union

import numpy as np

from ..core.errors import DomainError
from ..core.model import ModelParams, Variant
from .population import Flag
from .simulate import replicate_rng

logger = logging.getLogger(__name__)

MAX_WEIGHT_EXPONENT = 8.0

Terminal = Callable[[np.ndarray], np.ndarray]


def _onoff_paths(
    params: ModelParams,
    t: float,
    n: int,
    rng: np.random.Generator,
    start_active: bool = True,
) -> Tuple[np.ndarray, np.ndarray]:
    """Active occupation time on ``[0, t]`` and final flag of ``n`` paths."""
    active = np.full(n, start_active)
    clock = np.zeros(n)
    occupation = np.zeros(n)
    running = np.arange(n)
    while running.size:
        rate = np.where(active[running], params.c, params.c_prime)
        with np.errstate(divide="ignore"):
            ring = clock[running] + rng.standard_exponential(running.size) / rate
        stop = np.minimum(ring, t)
        occupation[running] += np.where(active[running], stop - clock[running], 0.0)
        clock[running] = stop
        switched = running[ring < t]
        active[switched] = ~active[switched]
        running = switched
    return occupation, active


def onoff_occupation(
    params: ModelParams,
    t: float,
    replicates: int,
    seed: int = 0,
    start_flag: Union[str, Flag] = Flag.ACTIVE,
) -> np.ndarray:
    """Active occupation times of independent on/off paths over ``[0, t]``.

    Branching plays no role; for the classical model the path is always active.
    """
    if t < 0.0:
        raise DomainError(f"Negative time t={t}")
    if params.variant is Variant.CLASSICAL:
        return np.full(replicates, float(t))
    rng = replicate_rng(seed, 0)
    start_active = Flag.parse(start_flag) is Flag.ACTIVE
    occupation, _ = _onoff_paths(params, t, replicates, rng, start_active)
    return occupation


def expected_occupation(params: ModelParams, t: float) -> float:
    """Exact mean active time on ``[0, t]`` for a path started active."""
    total = params.c + params.c_prime
    if total == 0.0:
        return float(t)
    stationary = params.c_prime / total
    return stationary * t + params.c * (1.0 - np.exp(-total * t)) / total**2


def onoff_bm_feynman_kac(
    params: ModelParams,
    lam: float,
    t: float,
    x: Union[float, np.ndarray],
    terminal_f: Terminal,
    terminal_g: Terminal,
    replicates: int,
    seed: int = 0,
) -> Tuple[np.ndarray, np.ndarray]:
    """Estimate the linear drifted system at ``(t, x)`` from single paths.

    Each path starts active at ``x``, moves while mobile (active in the
    seed-bank model, dormant in the spore model), carries the weight
    ``exp(s * active time)`` and is scored with ``terminal_f`` if it ends
    active and ``terminal_g`` if it ends dormant, evaluated at
    ``B_t + lam t``. All probe points share the same paths.

    Returns:
        ``(estimate, stderr)`` with the shape of ``x``.

    Raises:
        DomainError: If ``s t`` exceeds 8 (weight variance out of control).
    """
    s = params.s
    if s * t > MAX_WEIGHT_EXPONENT:
        raise DomainError(f"s*t={s * t:.3g} exceeds {MAX_WEIGHT_EXPONENT}")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    rng = replicate_rng(seed, 0)
    if params.variant is Variant.CLASSICAL:
        occupation, final_active = np.full(replicates, float(t)), np.ones(replicates, bool)
    else:
        occupation, final_active = _onoff_paths(params, t, replicates, rng)
    mobile = t - occupation if params.variant is Variant.SPORE else occupation
    shift = np.sqrt(mobile) * rng.standard_normal(replicates) + lam * t
    weight = np.exp(s * occupation)

    estimates = np.empty(xs.size)
    errors = np.empty(xs.size)
    for i, x0 in enumerate(xs):
        y = x0 + shift
        score = weight * np.where(final_active, terminal_f(y), terminal_g(y))
        estimates[i] = np.mean(score)
        errors[i] = np.std(score, ddof=1) / np.sqrt(replicates) if replicates > 1 else 0.0
    logger.debug(f"Feynman-Kac estimate at {xs.size} probe(s), {replicates} paths, t={t}")
    if np.ndim(x) == 0:
        return estimates[0], errors[0]
    return estimates, errors

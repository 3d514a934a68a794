"""Replicate statistics: rightmost particle, empirical CDFs, martingale paths."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from ..core.errors import DomainError, InsufficientSamplesError, PopulationOverflowError
from ..core.model import ModelParams
from ..wavespeed.speed import perron_eigenvector, speed_function
from .population import Flag, Population, additive_martingale, rightmost
from .simulate import DEFAULT_CAP, simulate

logger = logging.getLogger(__name__)

MIN_REPLICATES = 30
MAX_OVERFLOW_FRACTION = 0.1

T_ = TypeVar("T_")


@dataclass(frozen=True)
class RightmostStat:
    """Rightmost positions ``R_T`` over independent replicates.

    Fields:
    - T: Horizon.
    - samples: ``R_T`` of every completed replicate, in replicate order.
    - mean_speed: Sample mean of ``R_T / T``.
    - stderr: Standard error of ``mean_speed``.
    - overflows: Replicates dropped after exceeding the population cap.
    - half_samples: ``R_{T/2}`` of the same replicates.
    """

    T: float
    samples: np.ndarray
    mean_speed: float
    stderr: float
    overflows: int = 0
    half_samples: Optional[np.ndarray] = None

    def increment_speed(self, log_lag: float = 0.0) -> Tuple[float, float]:
        """Mean and standard error of ``(R_T - R_{T/2} + log_lag log 2) / (T/2)``.

        The constant offset of ``R_T`` cancels in the increment, and
        ``log_lag log 2`` restores the logarithmic delay accrued between
        ``T/2`` and ``T``.

        Raises:
            InsufficientSamplesError: If ``R_{T/2}`` was not recorded.
        """
        if self.half_samples is None:
            raise InsufficientSamplesError(0, self.samples.size, "half-horizon maxima")
        half = 0.5 * self.T
        speeds = (self.samples - self.half_samples + log_lag * math.log(2.0)) / half
        return float(np.mean(speeds)), float(np.std(speeds, ddof=1) / math.sqrt(speeds.size))


@dataclass(frozen=True)
class CdfEstimate:
    """Monte Carlo estimate of ``P(R_t <= x)`` at probe points with binomial errors."""

    t: float
    xs: np.ndarray
    p_hat: np.ndarray
    stderr: np.ndarray
    replicates: int
    overflows: int = 0


def run_replicates(
    job: Callable[[int], T_], replicates: int, threads: int = 1
) -> Tuple[List[Optional[T_]], int]:
    """Run ``job(r)`` for every replicate, tolerating a few overflows.

    Returns:
        Results in replicate order (``None`` for overflowed replicates) and
        the overflow count.

    Raises:
        InsufficientSamplesError: If more than 10% of the replicates overflow.
    """

    def guarded(r: int) -> Optional[T_]:
        try:
            return job(r)
        except PopulationOverflowError as e:
            logger.debug(f"Replicate {r} overflowed: {e}")
            return None

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(guarded, range(replicates)))
    overflows = sum(result is None for result in results)
    if overflows:
        logger.warning(f"{overflows}/{replicates} replicates exceeded the population cap")
    if overflows > MAX_OVERFLOW_FRACTION * replicates:
        required = int(math.ceil((1.0 - MAX_OVERFLOW_FRACTION) * replicates))
        raise InsufficientSamplesError(replicates - overflows, required, "completed replicates")
    return results, overflows


def rightmost_speed(
    params: ModelParams,
    T: float,
    replicates: int,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    threads: int = 1,
) -> RightmostStat:
    """Estimate ``E[R_T] / T`` from independent replicates.

    Each replicate also records ``R_{T/2}`` for `RightmostStat.increment_speed`.

    Raises:
        DomainError: If fewer than 30 replicates are requested.
        InsufficientSamplesError: If more than 10% of the replicates overflow.
    """
    if replicates < MIN_REPLICATES:
        raise DomainError(f"Need at least {MIN_REPLICATES} replicates, got {replicates}")

    def maxima(r: int) -> Tuple[float, float]:
        pop = simulate(params, T, seed=seed, cap=cap, snapshot_times=[0.5 * T], replicate=r)
        return rightmost(pop.snapshots[0]), rightmost(pop)

    results, overflows = run_replicates(maxima, replicates, threads)
    pairs = np.array([value for value in results if value is not None])
    samples = pairs[:, 1]
    speeds = samples / T
    stat = RightmostStat(
        T=T,
        samples=samples,
        mean_speed=float(np.mean(speeds)),
        stderr=float(np.std(speeds, ddof=1) / math.sqrt(speeds.size)),
        overflows=overflows,
        half_samples=pairs[:, 0],
    )
    logger.info(
        f"rightmost_speed[{params.variant.value}] T={T}: "
        f"{stat.mean_speed:.6g} +- {stat.stderr:.3g} ({samples.size} replicates)"
    )
    return stat


def empirical_rightmost_cdf(
    params: ModelParams,
    t: float,
    replicates: int,
    probe_xs: Sequence[float],
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    start_flag: "str | Flag" = Flag.ACTIVE,
    threads: int = 1,
) -> CdfEstimate:
    """Monte Carlo ``P(R_t <= x)`` from a founder with ``start_flag`` at 0.

    An active founder gives the ``u`` component of the dual PDE with
    Heaviside data, a dormant founder the ``v`` component.
    """
    xs = np.asarray(probe_xs, dtype=float)
    results, overflows = run_replicates(
        lambda r: rightmost(
            simulate(params, t, seed=seed, cap=cap, replicate=r, start_flag=start_flag)
        ),
        replicates,
        threads,
    )
    maxima = np.array([value for value in results if value is not None])
    n = maxima.size
    p_hat = np.mean(maxima[:, None] <= xs[None, :], axis=0)
    stderr = np.sqrt(p_hat * (1.0 - p_hat) / n)
    return CdfEstimate(
        t=t, xs=xs, p_hat=p_hat, stderr=stderr, replicates=n, overflows=overflows
    )


def martingale_weights(mu: float, params: ModelParams) -> Tuple[float, Tuple[float, float]]:
    """``(lambda_plus(mu), Perron eigenvector)`` used by the additive martingale."""
    return speed_function(mu, params).lambda_plus, perron_eigenvector(mu, params)


def martingale_paths(
    params: ModelParams,
    mu: float,
    times: Sequence[float],
    replicates: int,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    threads: int = 1,
) -> np.ndarray:
    """Additive martingale along each replicate at the requested times.

    Returns:
        Array of shape ``(completed replicates, len(times))``.
    """
    lam, d = martingale_weights(mu, params)
    times = sorted(float(t) for t in times)

    def path(r: int) -> List[float]:
        pop = simulate(
            params, times[-1], seed=seed, cap=cap, snapshot_times=times, replicate=r
        )
        return [additive_martingale(snap, mu, lam, d) for snap in pop.snapshots]

    results, _ = run_replicates(path, replicates, threads)
    return np.array([row for row in results if row is not None])


def founder_martingale(params: ModelParams, mu: float) -> float:
    """Martingale value at time 0 for one active particle at the origin."""
    lam, d = martingale_weights(mu, params)
    return additive_martingale(Population.founder(), mu, lam, d)


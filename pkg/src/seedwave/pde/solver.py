"""Explicit finite-difference integration of the reaction-diffusion systems.

The nonlinear systems use explicit Euler in time, centered second differences
for ``1/2 u_xx`` on the mobile component, pointwise exchange terms and the
selection term on the active component. Boundary values stay at their
initial far-field constants and both components are clamped to [0, 1] after
every step.

The linear drifted system carries an additional drift ``lambda d/dx`` on both
components, discretized by first-order upwinding, and uses zero-gradient
ghost cells so spatially constant data follows the homogeneous ODE exactly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..base.loggable import Loggable
from ..core.errors import ConfigurationError, DivergenceError, DomainError, NotBracketedError
from ..core.model import ModelParams, Variant, selection_term
from .fronts import front_position
from .grid import FieldPair, FrontTrace

DEFAULT_CFL = 0.4
MAX_REACTION_STEP = 0.5


@dataclass
class PDERun:
    """Result of one integration.

    Fields:
    - field: Final field pair.
    - trace: Front positions recorded every ``record_every`` time units.
    - snapshots: Stored fields at the recording times (only when requested).
    - dt: Time step actually used.
    - steps: Number of steps taken.
    """

    field: FieldPair
    trace: FrontTrace
    snapshots: List[FieldPair] = field(default_factory=list)
    dt: float = 0.0
    steps: int = 0


def _laplacian_dirichlet(w: np.ndarray, dx: float) -> np.ndarray:
    out = np.zeros_like(w)
    out[1:-1] = (w[:-2] - 2.0 * w[1:-1] + w[2:]) / (dx * dx)
    return out


def _laplacian_neumann(w: np.ndarray, dx: float) -> np.ndarray:
    padded = np.pad(w, 1, mode="edge")
    return (padded[:-2] - 2.0 * padded[1:-1] + padded[2:]) / (dx * dx)


def _upwind_gradient(w: np.ndarray, dx: float, lam: float) -> np.ndarray:
    """One-sided difference for ``lam * w_x``, taken from the upstream side."""
    padded = np.pad(w, 1, mode="edge")
    if lam >= 0.0:
        return (padded[2:] - padded[1:-1]) / dx
    return (padded[1:-1] - padded[:-2]) / dx


class FrontSolver(Loggable):
    """Explicit stepper for one parameter set.

    Args:
        params: Model parameters; the variant selects the mobile component.
        cfl: Time step as a multiple of ``dx^2`` (at most 0.4).
    """

    def __init__(self, params: ModelParams, cfl: float = DEFAULT_CFL):
        super().__init__()
        if not 0.0 < cfl <= DEFAULT_CFL:
            raise ConfigurationError(f"CFL factor must lie in (0, {DEFAULT_CFL}], got {cfl}")
        self.params = params
        self.cfl = cfl

    def _reaction_rate_bound(self) -> float:
        p = self.params
        return p.c + p.c_prime + p.kappa * (p.law.max_extra + 2)

    def resolve_dt(self, dx: float, dt: Optional[float], drift: float = 0.0) -> float:
        """Validate a requested step or derive the default ``cfl * dx^2``.

        Raises:
            ConfigurationError: If ``dt`` exceeds ``0.4 dx^2`` or makes the
                reaction or drift terms unstable.
        """
        limit = DEFAULT_CFL * dx * dx
        if dt is None:
            dt = self.cfl * dx * dx
        elif dt > limit * (1.0 + 1e-12):
            raise ConfigurationError(f"dt={dt} violates the stability limit 0.4*dx^2={limit}")
        if dt <= 0.0:
            raise ConfigurationError(f"Time step must be positive, got dt={dt}")
        if dt * self._reaction_rate_bound() > MAX_REACTION_STEP:
            raise ConfigurationError(f"dt={dt} is too large for the reaction rates")
        if abs(drift) * dt / dx > 1.0:
            raise ConfigurationError(f"dt={dt} violates the upwind limit for drift {drift}")
        return dt

    def _steps(self, T: float, dt: float) -> Tuple[int, float]:
        if T < 0.0:
            raise DomainError(f"Negative horizon T={T}")
        n_steps = int(math.ceil(T / dt - 1e-9)) if T > 0.0 else 0
        return n_steps, (T / n_steps if n_steps else dt)

    def _rhs(self, u: np.ndarray, v: np.ndarray, dx: float) -> Tuple[np.ndarray, np.ndarray]:
        p = self.params
        reaction = selection_term(u, p)
        if p.variant is Variant.CLASSICAL:
            du = 0.5 * _laplacian_dirichlet(u, dx) + reaction
            return du, du
        du = p.c * (v - u) + reaction
        dv = p.c_prime * (u - v)
        if p.variant is Variant.SEED_BANK:
            du += 0.5 * _laplacian_dirichlet(u, dx)
        else:
            dv += 0.5 * _laplacian_dirichlet(v, dx)
        return du, dv

    def integrate(
        self,
        ic: FieldPair,
        T: float,
        dt: Optional[float] = None,
        record_every: Optional[float] = None,
        level: float = 0.5,
        keep_snapshots: bool = False,
    ) -> PDERun:
        """Advance the nonlinear system from ``ic`` by ``T`` time units.

        Args:
            ic: Initial field with entries in [0, 1].
            T: Time horizon.
            dt: Step, default ``cfl * dx^2``; rounded down so ``T`` is hit
                exactly.
            record_every: Time between front samples; no trace if omitted.
            level: Level tracked on the ``u`` component.
            keep_snapshots: Also store the field at every recording time.

        Raises:
            DomainError: If the initial data leaves [0, 1].
            ConfigurationError: On a stability violation.
            DivergenceError: If a step produces non-finite values.
        """
        if np.any((ic.u < 0.0) | (ic.u > 1.0) | (ic.v < 0.0) | (ic.v > 1.0)):
            raise DomainError("Initial data must take values in [0, 1]")
        dx = ic.grid.dx
        dt = self.resolve_dt(dx, dt)
        n_steps, dt = self._steps(T, dt)
        record_stride = max(1, int(round(record_every / dt))) if record_every else 0

        u, v = ic.u.copy(), ic.v.copy()
        if self.params.variant is Variant.CLASSICAL:
            v = u.copy()
        u_bc, v_bc = (u[0], u[-1]), (v[0], v[-1])
        trace = FrontTrace(level=level, component="u")
        snapshots: List[FieldPair] = []
        t0 = ic.t
        debug = self.logger.isEnabledFor(logging.DEBUG)

        self.logger.info(
            f"Integrating {self.params.variant.value} on [{ic.grid.x0}, {ic.grid.x_max}] "
            f"dx={dx} dt={dt:.3g} steps={n_steps}"
        )

        def record(step: int) -> None:
            t = t0 + step * dt
            current = FieldPair(u=u.copy(), v=v.copy(), t=t, grid=ic.grid)
            try:
                trace.append(t, front_position(current, level, "u"))
            except NotBracketedError:
                trace.append(t, math.nan)
            if keep_snapshots:
                snapshots.append(current)

        if record_stride:
            record(0)
        for step in range(1, n_steps + 1):
            du, dv = self._rhs(u, v, dx)
            u = u + dt * du
            v = u if self.params.variant is Variant.CLASSICAL else v + dt * dv
            if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
                raise DivergenceError(step, t0 + step * dt)
            if debug:
                lo = min(float(np.min(u)), float(np.min(v)))
                hi = max(float(np.max(u)), float(np.max(v)))
                overshoot = max(hi - 1.0, -lo)
                if overshoot > 0.0:
                    self.logger.debug(f"step {step}: clamped overshoot {overshoot:.3g}")
            np.clip(u, 0.0, 1.0, out=u)
            if v is not u:
                np.clip(v, 0.0, 1.0, out=v)
            u[0], u[-1] = u_bc
            v[0], v[-1] = v_bc
            if record_stride and step % record_stride == 0:
                record(step)

        final = FieldPair(u=u.copy(), v=v.copy(), t=t0 + n_steps * dt, grid=ic.grid)
        self.logger.info(f"Finished at t={final.t:.6g} after {n_steps} steps")
        return PDERun(field=final, trace=trace, snapshots=snapshots, dt=dt, steps=n_steps)

    def integrate_linear_drifted(
        self,
        lam: float,
        ic: FieldPair,
        T: float,
        dt: Optional[float] = None,
    ) -> FieldPair:
        """Advance the linearized system with drift ``lam`` and growth ``s``.

        Seed-bank layout: ``u_t = 1/2 u_xx + lam u_x + c (v - u) + s u`` and
        ``v_t = lam v_x + c' (u - v)``; the spore layout moves the Laplacian to
        ``v``; the classical layout is the scalar equation. No clamping is
        applied.
        """
        p = self.params
        dx = ic.grid.dx
        dt = self.resolve_dt(dx, dt, drift=lam)
        n_steps, dt = self._steps(T, dt)
        s = p.s
        u, v = ic.u.copy(), ic.v.copy()
        self.logger.info(
            f"Linear drifted run ({p.variant.value}) lambda={lam:.6g} dt={dt:.3g} steps={n_steps}"
        )
        for step in range(1, n_steps + 1):
            du = lam * _upwind_gradient(u, dx, lam) + s * u
            if p.variant is Variant.CLASSICAL:
                u = u + dt * (du + 0.5 * _laplacian_neumann(u, dx))
                v = u
            else:
                du += p.c * (v - u)
                dv = lam * _upwind_gradient(v, dx, lam) + p.c_prime * (u - v)
                if p.variant is Variant.SEED_BANK:
                    du += 0.5 * _laplacian_neumann(u, dx)
                else:
                    dv += 0.5 * _laplacian_neumann(v, dx)
                u, v = u + dt * du, v + dt * dv
            if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
                raise DivergenceError(step, ic.t + step * dt)
        return FieldPair(u=u, v=v, t=ic.t + n_steps * dt, grid=ic.grid)


def integrate(
    params: ModelParams,
    ic: FieldPair,
    T: float,
    dt: Optional[float] = None,
    record_every: Optional[float] = None,
    level: float = 0.5,
    keep_snapshots: bool = False,
    cfl: float = DEFAULT_CFL,
) -> PDERun:
    """Integrate the nonlinear system of ``params.variant``; see `FrontSolver.integrate`."""
    return FrontSolver(params, cfl).integrate(ic, T, dt, record_every, level, keep_snapshots)


def integrate_linear_drifted(
    params: ModelParams,
    lam: float,
    ic: FieldPair,
    T: float,
    dt: Optional[float] = None,
    cfl: float = DEFAULT_CFL,
) -> FieldPair:
    """Integrate the linear drifted system; see `FrontSolver.integrate_linear_drifted`."""
    return FrontSolver(params, cfl).integrate_linear_drifted(lam, ic, T, dt)

"""Grids, field pairs, front traces and initial conditions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from ..core.errors import DomainError

MIN_GRID_POINTS = 16
COMPONENTS = ("u", "v")


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid ``x0, x0 + dx, ..., x0 + (n - 1) dx``."""

    x0: float
    dx: float
    n: int

    def __post_init__(self):
        if not self.dx > 0.0:
            raise DomainError(f"Grid spacing must be positive, got dx={self.dx}")
        if self.n < MIN_GRID_POINTS:
            raise DomainError(f"Grid needs at least {MIN_GRID_POINTS} points, got {self.n}")

    @classmethod
    def from_bounds(cls, xmin: float, xmax: float, dx: float) -> "Grid1D":
        """Grid from its endpoints; ``xmax`` is rounded to the nearest grid point."""
        if not xmax > xmin:
            raise DomainError(f"Empty domain [{xmin}, {xmax}]")
        return cls(x0=xmin, dx=dx, n=int(round((xmax - xmin) / dx)) + 1)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def x_max(self) -> float:
        return self.x0 + (self.n - 1) * self.dx

    def contains(self, value: float) -> bool:
        return self.x0 <= value <= self.x_max


@dataclass
class FieldPair:
    """Discretized ``(u, v)`` on a grid at time ``t``.

    Both components are frequencies in [0, 1] for the nonlinear systems; the
    linear drifted system reuses the container without that restriction.
    """

    u: np.ndarray
    v: np.ndarray
    t: float
    grid: Grid1D

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        if self.u.shape != (self.grid.n,) or self.v.shape != (self.grid.n,):
            raise DomainError(
                f"Field shapes {self.u.shape}/{self.v.shape} do not match grid size {self.grid.n}"
            )
        if self.t < 0.0:
            raise DomainError(f"Negative time t={self.t}")

    def component(self, name: str) -> np.ndarray:
        if name not in COMPONENTS:
            raise DomainError(f"Unknown component {name!r}, expected 'u' or 'v'")
        return self.u if name == "u" else self.v

    def copy(self) -> "FieldPair":
        return FieldPair(u=self.u.copy(), v=self.v.copy(), t=self.t, grid=self.grid)

    @classmethod
    def constant(cls, grid: Grid1D, u: float, v: float) -> "FieldPair":
        return cls(u=np.full(grid.n, float(u)), v=np.full(grid.n, float(v)), t=0.0, grid=grid)


@dataclass
class FrontTrace:
    """Level-set positions sampled during an integration.

    Positions are NaN at times where the level set left the grid.
    """

    level: float
    component: str = "u"
    times: List[float] = field(default_factory=list)
    positions: List[float] = field(default_factory=list)

    def append(self, t: float, position: float) -> None:
        if self.times and t <= self.times[-1]:
            raise DomainError(f"Front times must increase: {t} after {self.times[-1]}")
        self.times.append(float(t))
        self.positions.append(float(position))

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.times, dtype=float), np.asarray(self.positions, dtype=float)

    def __len__(self) -> int:
        return len(self.times)


def heaviside_ic(grid: Grid1D) -> FieldPair:
    """Indicator of ``[0, inf)`` in both components.

    Raises:
        DomainError: If the grid does not contain the origin.
    """
    if not grid.contains(0.0):
        raise DomainError(f"Grid [{grid.x0}, {grid.x_max}] does not contain 0")
    # grid points are computed as x0 + i*dx, so snap the origin to its nearest point
    x = grid.x
    step = (x >= -0.5 * grid.dx * 1e-9).astype(float)
    return FieldPair(u=step, v=step.copy(), t=0.0, grid=grid)


def exponential_ic(grid: Grid1D, mu: float, d: Tuple[float, float]) -> FieldPair:
    """Smooth data ``exp(-d_i exp(mu x))`` with tails ``1 - u0 ~ d1 exp(mu x)``.

    Args:
        grid: Spatial grid.
        mu: Decay rate of the tail, strictly negative.
        d: Positive tail amplitudes ``(d1, d2)``, usually the Perron
            eigenvector at ``mu``.
    """
    if not mu < 0.0:
        raise DomainError(f"Decay rate must be negative, got mu={mu}")
    d1, d2 = d
    if not (d1 > 0.0 and d2 > 0.0):
        raise DomainError(f"Tail amplitudes must be positive, got {d}")
    with np.errstate(over="ignore"):
        tail = np.exp(mu * grid.x)
        u = np.exp(-d1 * tail)
        v = np.exp(-d2 * tail)
    return FieldPair(u=u, v=v, t=0.0, grid=grid)

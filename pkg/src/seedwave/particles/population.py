"""Particle populations of on/off branching Brownian motion.

A population is stored as flat arrays (position, active flag, local clock)
with amortized doubling, so a replicate can grow to millions of particles
without per-particle Python objects. `Particle` is only used at the edges
(construction from explicit lists, tests).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Tuple

import numpy as np

from ..core.errors import DomainError


class Flag(str, Enum):
    """Particle state."""

    ACTIVE = "active"
    DORMANT = "dormant"

    @classmethod
    def parse(cls, value: "str | Flag") -> "Flag":
        try:
            return cls(value) if not isinstance(value, Flag) else value
        except ValueError as e:
            raise DomainError(f"Unknown flag {value!r}, expected 'active' or 'dormant'") from e


@dataclass(frozen=True)
class Particle:
    position: float
    flag: Flag = Flag.ACTIVE


@dataclass
class Population:
    """Particles at a common time ``t``.

    Attributes:
        positions: Particle positions.
        active: Boolean active flags; dormant particles are ``False``.
        t: Common simulation time of all particles.
        event_count: Number of clock rings processed so far.
        rng: Generator driving the replicate (``None`` for frozen snapshots).
        snapshots: Frozen copies taken at requested times.
    """

    positions: np.ndarray
    active: np.ndarray
    t: float = 0.0
    event_count: int = 0
    rng: Optional[np.random.Generator] = None
    snapshots: List["Population"] = field(default_factory=list)

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        self.active = np.asarray(self.active, dtype=bool)
        if self.positions.shape != self.active.shape or self.positions.ndim != 1:
            raise DomainError("positions and flags must be 1-D arrays of equal length")
        if self.positions.size == 0:
            raise DomainError("A population holds at least one particle")

    @classmethod
    def founder(
        cls,
        x: float = 0.0,
        flag: "str | Flag" = Flag.ACTIVE,
        rng: Optional[np.random.Generator] = None,
    ) -> "Population":
        """Single particle at ``x`` at time 0."""
        return cls(
            positions=np.array([float(x)]),
            active=np.array([Flag.parse(flag) is Flag.ACTIVE]),
            rng=rng,
        )

    @classmethod
    def from_particles(cls, particles: Iterable[Particle], t: float = 0.0) -> "Population":
        items = list(particles)
        return cls(
            positions=np.array([p.position for p in items], dtype=float),
            active=np.array([Flag.parse(p.flag) is Flag.ACTIVE for p in items], dtype=bool),
            t=t,
        )

    @property
    def size(self) -> int:
        return int(self.positions.size)

    @property
    def particles(self) -> List[Particle]:
        return [
            Particle(float(x), Flag.ACTIVE if a else Flag.DORMANT)
            for x, a in zip(self.positions, self.active)
        ]

    def snapshot(self) -> "Population":
        """Frozen copy without generator or nested snapshots."""
        return Population(
            positions=self.positions.copy(),
            active=self.active.copy(),
            t=self.t,
            event_count=self.event_count,
        )


def population_counts(pop: Population) -> Tuple[int, int]:
    """Return ``(active, dormant)`` particle counts."""
    n_active = int(np.count_nonzero(pop.active))
    return n_active, pop.size - n_active


def rightmost(pop: Population) -> float:
    """Largest position over both flags."""
    return float(np.max(pop.positions))


def additive_martingale(
    pop: Population, mu: float, lam: float, d: Tuple[float, float]
) -> float:
    """``sum_active d1 exp(mu (x + lam t)) + sum_dormant d2 exp(mu (x + lam t))``."""
    weights = np.where(pop.active, d[0], d[1])
    return float(np.sum(weights * np.exp(mu * (pop.positions + lam * pop.t))))

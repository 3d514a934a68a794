"""Exact event-driven simulation of on/off branching Brownian motion.

Every particle carries its own clock. An active particle waits an
exponential time with rate ``kappa + c`` and then branches with probability
``kappa / (kappa + c)`` (adding ``k`` active copies at its position with
probability ``p_k``) or falls dormant; a dormant particle resuscitates at
rate ``c'``. Between its own events a particle moves by a centered Gaussian
with variance equal to the time spent in its mobile state: active in the
seed-bank model and the classical model, dormant in the spore model.

Events are processed in rounds: each round advances every pending particle
to its next event or to the horizon, whichever comes first. Exponential
clocks are memoryless, so stopping at a horizon and resuming later is exact
in law.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..base.loggable import Loggable
from ..core.errors import DomainError, PopulationOverflowError
from ..core.model import ModelParams, Variant
from ..wavespeed.speed import expected_population
from .population import Flag, Population

DEFAULT_CAP = 2_000_000


def replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    """Counter-based stream for replicate ``replicate`` of master seed ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, replicate])))


class _Buffer:
    """Growable particle arrays with amortized doubling."""

    def __init__(self, pop: Population):
        n = pop.size
        capacity = max(16, 2 * n)
        self.pos = np.empty(capacity)
        self.active = np.empty(capacity, dtype=bool)
        self.clock = np.empty(capacity)
        self.pos[:n] = pop.positions
        self.active[:n] = pop.active
        self.clock[:n] = pop.t
        self.size = n

    def append(self, pos: np.ndarray, clock: np.ndarray) -> np.ndarray:
        """Append active particles; returns their indices."""
        extra = pos.size
        needed = self.size + extra
        if needed > self.pos.size:
            capacity = max(needed, 2 * self.pos.size)
            for name in ("pos", "active", "clock"):
                old = getattr(self, name)
                grown = np.empty(capacity, dtype=old.dtype)
                grown[: self.size] = old[: self.size]
                setattr(self, name, grown)
        idx = np.arange(self.size, needed)
        self.pos[idx] = pos
        self.active[idx] = True
        self.clock[idx] = clock
        self.size = needed
        return idx


class BranchingSimulator(Loggable):
    """Simulator for one parameter set.

    Args:
        params: Rates, offspring law and variant (which flag is mobile).
        cap: Maximum population size before `PopulationOverflowError`.
    """

    def __init__(self, params: ModelParams, cap: int = DEFAULT_CAP):
        super().__init__()
        if cap < 1:
            raise DomainError(f"Population cap must be positive, got {cap}")
        self.params = params
        self.cap = cap
        self._cdf = params.law.cdf()
        self._branch_prob = params.kappa / (params.kappa + params.c)

    def check_cap(self, T: float) -> None:
        """Warn when the expected population at ``T`` exceeds the cap."""
        expected = sum(expected_population(self.params, T))
        if expected > self.cap:
            self.logger.warning(
                f"Expected population {expected:.3g} at T={T} exceeds cap {self.cap}"
            )

    def _mobile(self, active: np.ndarray) -> np.ndarray:
        if self.params.variant is Variant.SPORE:
            return ~active
        return active

    def advance(self, pop: Population, horizon: float) -> Population:
        """Advance ``pop`` in place to time ``horizon``.

        Raises:
            PopulationOverflowError: If the population exceeds the cap.
        """
        if horizon < pop.t:
            raise DomainError(f"Cannot advance from t={pop.t} back to {horizon}")
        if pop.rng is None:
            raise DomainError("Population has no generator attached")
        rng = pop.rng
        p = self.params
        buf = _Buffer(pop)
        pending = np.arange(buf.size)
        events = 0

        while pending.size:
            active = buf.active[pending]
            rate = np.where(active, p.kappa + p.c, p.c_prime)
            with np.errstate(divide="ignore"):
                wait = rng.standard_exponential(pending.size) / rate
            start = buf.clock[pending]
            ring = start + wait
            hit = ring < horizon
            stop = np.where(hit, ring, horizon)

            elapsed = stop - start
            mobile = self._mobile(active)
            steps = rng.standard_normal(pending.size)
            buf.pos[pending] += np.where(mobile, np.sqrt(elapsed) * steps, 0.0)
            buf.clock[pending] = stop

            fired = pending[hit]
            if fired.size == 0:
                break
            events += int(fired.size)
            was_active = active[hit]
            branch = np.zeros(fired.size, dtype=bool)
            branch[was_active] = rng.random(int(was_active.sum())) < self._branch_prob
            # switching: active -> dormant unless branching, dormant -> active
            switch = ~branch
            buf.active[fired[switch]] = ~buf.active[fired[switch]]

            parents = fired[branch]
            children = np.empty(0, dtype=np.intp)
            if parents.size:
                draws = rng.random(parents.size)
                copies = np.searchsorted(self._cdf, draws, side="right") + 1
                copies = np.minimum(copies, self._cdf.size)
                source = np.repeat(parents, copies)
                if buf.size + source.size > self.cap:
                    raise PopulationOverflowError(
                        float(np.min(buf.clock[parents])),
                        buf.size + int(source.size),
                        self.cap,
                    )
                children = buf.append(buf.pos[source], buf.clock[source])
            pending = np.concatenate([fired, children])

        n = buf.size
        pop.positions = buf.pos[:n].copy()
        pop.active = buf.active[:n].copy()
        pop.t = float(horizon)
        pop.event_count += events
        return pop


def simulate(
    params: ModelParams,
    T: float,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    snapshot_times: Optional[Sequence[float]] = None,
    replicate: int = 0,
    start_flag: "str | Flag" = Flag.ACTIVE,
    x0: float = 0.0,
) -> Population:
    """Run one replicate from a single particle at ``x0``.

    Args:
        params: Model parameters; ``params.variant`` selects the motion rule.
        T: Horizon (> 0).
        seed: Master seed.
        cap: Population cap.
        snapshot_times: Times in ``(0, T]`` at which frozen copies are stored
            in ``Population.snapshots``.
        replicate: Replicate index; together with ``seed`` it fixes the stream.
        start_flag: Flag of the founder.
        x0: Founder position.

    Returns:
        The population at ``T`` with snapshots attached.

    Raises:
        PopulationOverflowError: If the population exceeds ``cap``.
    """
    if not T > 0.0:
        raise DomainError(f"Horizon must be positive, got T={T}")
    simulator = BranchingSimulator(params, cap)
    simulator.check_cap(T)
    pop = Population.founder(x0, start_flag, rng=replicate_rng(seed, replicate))
    times = sorted(float(t) for t in (snapshot_times or []))
    for t in times:
        if not 0.0 <= t <= T:
            raise DomainError(f"Snapshot time {t} outside [0, {T}]")
        simulator.advance(pop, t)
        pop.snapshots.append(pop.snapshot())
    if pop.t < T:
        simulator.advance(pop, T)
    return pop

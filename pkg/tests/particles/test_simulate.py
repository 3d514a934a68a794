import numpy as np
import pytest

from seedwave.core.errors import DomainError, PopulationOverflowError
from seedwave.core.model import ModelParams
from seedwave.particles.feynman_kac import expected_occupation
from seedwave.particles.population import (
    Flag,
    Particle,
    Population,
    additive_martingale,
    population_counts,
    rightmost,
)
from seedwave.particles.simulate import BranchingSimulator, replicate_rng, simulate
from seedwave.wavespeed.speed import expected_population, growth_rate


def test_replicate_streams_are_reproducible():
    a = replicate_rng(11, 3).random(5)
    b = replicate_rng(11, 3).random(5)
    c = replicate_rng(11, 4).random(5)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_simulation_is_deterministic(seedbank):
    first = simulate(seedbank, 3.0, seed=5, replicate=2)
    second = simulate(seedbank, 3.0, seed=5, replicate=2)
    np.testing.assert_array_equal(first.positions, second.positions)
    np.testing.assert_array_equal(first.active, second.active)
    assert first.t == 3.0


def test_classical_population_stays_active(classical):
    pop = simulate(classical, 3.0, seed=1)
    assert population_counts(pop) == (pop.size, 0)


def test_spore_without_dormancy_never_moves():
    params = ModelParams(variant="spore", c=0.0, c_prime=1.0)
    pop = simulate(params, 2.0, seed=3)
    assert pop.size > 1
    np.testing.assert_array_equal(pop.positions, 0.0)


def test_dormant_founder_of_seedbank_waits_in_place():
    params = ModelParams(c=1.0, c_prime=1e-9)
    pop = simulate(params, 1.0, seed=2, start_flag="dormant", x0=1.5)
    assert pop.size == 1
    assert pop.positions[0] == 1.5
    assert not pop.active[0]


def test_overflow_raises():
    params = ModelParams(kappa=5.0)
    with pytest.raises(PopulationOverflowError) as excinfo:
        simulate(params, 10.0, seed=0, cap=50)
    assert excinfo.value.cap == 50


def test_snapshots_are_frozen_in_time_order(seedbank):
    pop = simulate(seedbank, 2.0, seed=4, snapshot_times=[1.5, 0.5])
    assert [snap.t for snap in pop.snapshots] == [0.5, 1.5]
    assert pop.snapshots[0].size <= pop.snapshots[1].size <= pop.size
    with pytest.raises(DomainError):
        simulate(seedbank, 2.0, snapshot_times=[3.0])


def test_positive_horizon_required(seedbank):
    with pytest.raises(DomainError):
        simulate(seedbank, 0.0)


def test_mean_counts_follow_flow_matrix(seedbank):
    T = 2.0
    counts = np.array([population_counts(simulate(seedbank, T, seed=8, replicate=r)) for r in range(600)])
    mean = counts.mean(axis=0)
    stderr = counts.std(axis=0, ddof=1) / np.sqrt(counts.shape[0])
    expected = np.array(expected_population(seedbank, T))
    assert np.all(np.abs(mean - expected) <= 5.0 * stderr)


def test_advance_cannot_go_backwards(seedbank):
    pop = Population.founder(rng=replicate_rng(0, 0))
    simulator = BranchingSimulator(seedbank)
    simulator.advance(pop, 1.0)
    with pytest.raises(DomainError):
        simulator.advance(pop, 0.5)


def test_population_helpers():
    pop = Population.from_particles(
        [Particle(1.0), Particle(-2.0, Flag.DORMANT), Particle(3.0, Flag.DORMANT)], t=2.0
    )
    assert population_counts(pop) == (1, 2)
    assert rightmost(pop) == 3.0
    assert [p.flag for p in pop.particles] == [Flag.ACTIVE, Flag.DORMANT, Flag.DORMANT]
    value = additive_martingale(pop, -1.0, 0.5, (2.0, 1.0))
    expected = 2.0 * np.exp(-(1.0 + 1.0)) + np.exp(-(-2.0 + 1.0)) + np.exp(-(3.0 + 1.0))
    assert value == pytest.approx(expected)


def test_unknown_flag():
    with pytest.raises(DomainError):
        Flag.parse("sleeping")


def test_statistics_are_exchangeable_under_relabelling(seedbank):
    pop = simulate(seedbank, 3.0, seed=6)
    order = np.random.default_rng(0).permutation(pop.size)
    shuffled = Population(positions=pop.positions[order], active=pop.active[order], t=pop.t)
    assert rightmost(shuffled) == rightmost(pop)
    assert population_counts(shuffled) == population_counts(pop)
    assert additive_martingale(shuffled, -1.0, 1.0, (2.0, 1.0)) == pytest.approx(
        additive_martingale(pop, -1.0, 1.0, (2.0, 1.0))
    )


@pytest.mark.slow
def test_population_grows_at_perron_rate(seedbank):
    T = 12.0
    sizes = np.array([simulate(seedbank, T, seed=21, replicate=r).size for r in range(200)])
    assert np.log(sizes.mean()) / T == pytest.approx(growth_rate(seedbank), rel=0.1)


@pytest.mark.slow
def test_vanishing_branching_leaves_single_onoff_path():
    params = ModelParams(c=1.0, c_prime=1.0, kappa=1e-12)
    T = 5.0
    pops = [simulate(params, T, seed=22, replicate=r) for r in range(4000)]
    assert all(pop.size == 1 for pop in pops)
    displacement = np.array([pop.positions[0] for pop in pops])
    assert displacement.var(ddof=1) == pytest.approx(expected_occupation(params, T), rel=0.1)

import math

import numpy as np
import pytest
from scipy.linalg import expm

from seedwave.core.errors import DomainError, InsufficientSamplesError
from seedwave.core.model import ModelParams
from seedwave.particles.feynman_kac import (
    expected_occupation,
    onoff_bm_feynman_kac,
    onoff_occupation,
)
from seedwave.particles.stats import (
    RightmostStat,
    empirical_rightmost_cdf,
    founder_martingale,
    martingale_paths,
    rightmost_speed,
    run_replicates,
)
from seedwave.wavespeed.speed import flow_matrix


def test_rightmost_speed_needs_thirty_replicates(seedbank):
    with pytest.raises(DomainError):
        rightmost_speed(seedbank, 2.0, 10)


def test_rightmost_speed_independent_of_threads(seedbank):
    one = rightmost_speed(seedbank, 3.0, 40, seed=9, threads=1)
    four = rightmost_speed(seedbank, 3.0, 40, seed=9, threads=4)
    np.testing.assert_array_equal(one.samples, four.samples)
    assert one.overflows == 0


def test_too_many_overflows_fail():
    params = ModelParams(kappa=5.0)
    with pytest.raises(InsufficientSamplesError):
        rightmost_speed(params, 10.0, 30, cap=20)


def test_run_replicates_tolerates_rare_overflow():
    from seedwave.core.errors import PopulationOverflowError

    def job(r):
        if r == 0:
            raise PopulationOverflowError(1.0, 10, 5)
        return r

    results, overflows = run_replicates(job, 20)
    assert overflows == 1
    assert results[0] is None and results[1:] == list(range(1, 20))


def test_empirical_cdf_is_a_cdf(seedbank):
    est = empirical_rightmost_cdf(seedbank, 1.0, 60, [-5.0, 0.0, 1.0, 3.0, 20.0], seed=2)
    assert np.all(np.diff(est.p_hat) >= 0.0)
    assert est.p_hat[0] == 0.0 and est.p_hat[-1] == 1.0
    assert np.all(est.stderr >= 0.0)
    assert est.replicates == 60


def test_founder_martingale_equals_d1(seedbank):
    assert founder_martingale(seedbank, -1.0) == pytest.approx(2.0)


def test_martingale_paths_shape(seedbank):
    paths = martingale_paths(seedbank, -0.6, [1.0, 0.5], 30, seed=1)
    assert paths.shape == (30, 2)
    assert np.all(paths > 0.0)


def test_occupation_mean_matches_closed_form(seedbank):
    occ = onoff_occupation(seedbank, 2.0, 20000, seed=4)
    assert np.all((occ >= 0.0) & (occ <= 2.0))
    stderr = occ.std(ddof=1) / math.sqrt(occ.size)
    assert abs(occ.mean() - expected_occupation(seedbank, 2.0)) < 5.0 * stderr


def test_occupation_of_classical_path_is_full(classical):
    np.testing.assert_array_equal(onoff_occupation(classical, 1.5, 10), 1.5)


def test_feynman_kac_without_selection_is_plain_expectation():
    params = ModelParams(kappa=1e-12)
    one = lambda y: np.ones_like(y)  # noqa: E731
    estimate, stderr = onoff_bm_feynman_kac(params, 0.5, 1.0, 0.0, one, one, 1000, seed=3)
    assert np.ndim(estimate) == 0
    assert estimate == pytest.approx(1.0, abs=1e-9)
    assert stderr < 1e-9


def test_feynman_kac_constant_data_matches_flow_matrix(seedbank):
    one = lambda y: np.ones_like(y)  # noqa: E731
    t = 1.0
    estimate, stderr = onoff_bm_feynman_kac(seedbank, 1.0, t, np.array([0.0, 2.0]), one, one, 20000, seed=6)
    exact = (expm(flow_matrix(seedbank) * t) @ np.ones(2))[0]
    assert estimate.shape == (2,)
    assert np.all(np.abs(estimate - exact) < 5.0 * stderr)


def test_feynman_kac_weight_bound(seedbank):
    one = lambda y: np.ones_like(y)  # noqa: E731
    with pytest.raises(DomainError):
        onoff_bm_feynman_kac(seedbank, 1.0, 9.0, 0.0, one, one, 10)


@pytest.mark.slow
def test_flag_marginal_reaches_stationary_fraction():
    params = ModelParams(c=1.0, c_prime=3.0, kappa=1e-12)
    T = 50.0
    occ = onoff_occupation(params, T, 10000, seed=12)
    assert occ.mean() / T == pytest.approx(0.75, rel=0.02)
    indicator = lambda y: np.ones_like(y)  # noqa: E731
    never = lambda y: np.zeros_like(y)  # noqa: E731
    p_active, _ = onoff_bm_feynman_kac(params, 0.0, T, 0.0, indicator, never, 10000, seed=13)
    assert p_active == pytest.approx(0.75, rel=0.02)


def test_feynman_kac_without_switching_is_heat_kernel():
    params = ModelParams(c=0.0, c_prime=1.0, kappa=1e-12)
    below = lambda y: (y <= 0.0).astype(float)  # noqa: E731
    estimate, stderr = onoff_bm_feynman_kac(params, 0.0, 1.0, 0.0, below, below, 10000, seed=14)
    assert abs(estimate - 0.5) < 3.0 * stderr


def test_feynman_kac_at_time_zero_is_terminal_data(seedbank):
    xs = np.array([-1.0, 0.0, 0.5, 2.0])
    f = lambda y: np.exp(-(y**2))  # noqa: E731
    g = lambda y: np.zeros_like(y)  # noqa: E731
    estimate, stderr = onoff_bm_feynman_kac(seedbank, 1.0, 0.0, xs, f, g, 50, seed=1)
    np.testing.assert_array_equal(estimate, f(xs))
    np.testing.assert_array_equal(stderr, 0.0)


def test_increment_speed_from_half_horizon_maxima(seedbank):
    stat = rightmost_speed(seedbank, 4.0, 30, seed=3)
    assert stat.half_samples.shape == stat.samples.shape
    lag = 1.5
    manual = (stat.samples - stat.half_samples + lag * math.log(2.0)) / 2.0
    mean, stderr = stat.increment_speed(lag)
    assert mean == pytest.approx(manual.mean())
    assert stderr == pytest.approx(manual.std(ddof=1) / math.sqrt(manual.size))


def test_increment_speed_needs_half_horizon_maxima():
    stat = RightmostStat(T=2.0, samples=np.zeros(30), mean_speed=0.0, stderr=0.0)
    with pytest.raises(InsufficientSamplesError):
        stat.increment_speed()

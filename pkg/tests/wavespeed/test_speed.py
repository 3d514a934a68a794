import math

import numpy as np
import pytest
from scipy.linalg import expm

from seedwave.core.errors import DomainError, SolverError
from seedwave.core.model import ModelParams, Variant
from seedwave.wavespeed.speed import (
    HISTORICAL_UPPER_BOUND,
    determinant_poly,
    determinant_roots,
    diagonal_entries,
    eigen_matrix,
    expected_population,
    flow_matrix,
    growth_rate,
    perron_eigenvector,
    radicand,
    speed_derivative,
    speed_function,
    speed_function_numeric,
    stationary_active_fraction,
)

SQRT2 = math.sqrt(2.0)


def test_classical_closed_form(classical):
    assert speed_function(-SQRT2, classical).lambda_plus == pytest.approx(SQRT2, abs=1e-12)
    assert speed_function(-1.0, classical).lambda_plus == pytest.approx(1.5)


def test_seedbank_at_minus_one_is_one_with_d1_two(seedbank):
    ev = speed_function(-1.0, seedbank)
    assert ev.lambda_plus == pytest.approx(1.0, abs=1e-12)
    d1, d2 = perron_eigenvector(-1.0, seedbank)
    assert d1 == pytest.approx(2.0, abs=1e-12)
    assert d2 == 1.0


def test_seedbank_reference_values(seedbank):
    assert speed_function(-0.6, seedbank).lambda_plus == pytest.approx(1.2518, abs=1e-3)
    assert speed_function(-3.0, seedbank).lambda_plus == pytest.approx(1.559, abs=1e-3)
    assert perron_eigenvector(-3.0, seedbank)[0] == pytest.approx(5.676, abs=1e-3)


def test_spore_minimum_value(spore):
    assert speed_function(-SQRT2, spore).lambda_plus == pytest.approx(1.0 / SQRT2, abs=1e-12)


def test_nonnegative_decay_rate_rejected(seedbank):
    for mu in (0.0, 0.5):
        with pytest.raises(DomainError):
            speed_function(mu, seedbank)


def test_radicand_nonnegative(any_model):
    for mu in np.linspace(-5.0, -0.01, 50):
        assert radicand(float(mu), any_model) >= 0.0


@pytest.mark.parametrize("mu", [-4.0, -1.7, -1.0, -0.3, -0.05])
def test_closed_form_matches_eigensolve(mu, any_model):
    closed = speed_function(mu, any_model)
    numeric = speed_function_numeric(mu, any_model)
    assert closed.lambda_plus == pytest.approx(numeric.lambda_plus, abs=1e-10)
    if any_model.variant is not Variant.CLASSICAL:
        assert closed.lambda_minus == pytest.approx(numeric.lambda_minus, abs=1e-10)


@pytest.mark.parametrize("mu", [-3.0, -1.2, -0.6])
def test_both_branches_are_determinant_roots(mu, seedbank, spore):
    for params in (seedbank, spore):
        ev = speed_function(mu, params)
        assert abs(determinant_poly(mu, ev.lambda_plus, params)) < 1e-10
        assert abs(determinant_poly(mu, ev.lambda_minus, params)) < 1e-10


def test_perron_vector_positive_and_in_kernel(seedbank, spore):
    for params in (seedbank, spore):
        for mu in (-2.5, -1.0, -0.2):
            d = np.array(perron_eigenvector(mu, params))
            assert np.all(d > 0.0)
            lam = speed_function(mu, params).lambda_plus
            np.testing.assert_allclose(eigen_matrix(mu, lam, params) @ d, 0.0, atol=1e-10)


def test_perron_vector_switches_normalization_without_resuscitation():
    params = ModelParams(c=1.0, c_prime=0.0)
    d1, d2 = perron_eigenvector(-1.0, params)
    assert d1 == 1.0


def test_diagonal_entries_negative_with_product_cc(seedbank):
    f_a, f_d = diagonal_entries(-1.19103, seedbank)
    assert f_a < 0.0 and f_d < 0.0
    assert f_a * f_d == pytest.approx(seedbank.c * seedbank.c_prime, abs=1e-10)


def test_diagonal_entries_rejects_non_negative_entry(seedbank, monkeypatch):
    from seedwave.wavespeed import speed

    monkeypatch.setattr(speed, "eigen_matrix", lambda mu, lam, params: np.array([[0.1, 1.0], [1.0, -1.0]]))
    with pytest.raises(SolverError):
        speed.diagonal_entries(-1.19103, seedbank)


def test_derivative_matches_central_difference(any_model):
    for mu in (-2.0, -1.0, -0.5):
        h = 1e-6
        central = (
            speed_function(mu + h, any_model).lambda_plus - speed_function(mu - h, any_model).lambda_plus
        ) / (2 * h)
        assert speed_derivative(mu, any_model) == pytest.approx(central, abs=1e-6)


def test_determinant_roots_bracket_critical_decay(seedbank):
    roots = determinant_roots(1.2 * 0.982416, seedbank)
    negative = roots[roots < 0.0]
    assert roots.size == 3
    assert negative.size == 2
    assert negative[0] < -1.19103 < negative[1]


def test_historical_bound_value():
    assert HISTORICAL_UPPER_BOUND == pytest.approx(math.sqrt(math.sqrt(5.0) - 1.0))
    assert 1.0 < HISTORICAL_UPPER_BOUND < SQRT2


def test_growth_rate_is_golden_ratio_conjugate(seedbank):
    assert growth_rate(seedbank) == pytest.approx((math.sqrt(5.0) - 1.0) / 2.0, abs=1e-12)


def test_expected_population_uses_transposed_flow(seedbank):
    t = 2.0
    active, dormant = expected_population(seedbank, t)
    expected = expm(flow_matrix(seedbank).T * t) @ np.array([1.0, 0.0])
    assert (active, dormant) == pytest.approx(tuple(expected))
    assert active + dormant == pytest.approx((expm(flow_matrix(seedbank) * t) @ np.ones(2))[0])


def test_stationary_active_fraction():
    assert stationary_active_fraction(ModelParams(c=1.0, c_prime=3.0)) == pytest.approx(0.75)

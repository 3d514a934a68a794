import math

import numpy as np
import pytest

from seedwave.core.errors import SolverError
from seedwave.core.model import ModelParams, Variant
from seedwave.wavespeed.critical import (
    SWEEP_COLUMNS,
    SweepAxis,
    critical_speed,
    scan_trace,
    sweep_critical,
)
from seedwave.wavespeed.speed import HISTORICAL_UPPER_BOUND, speed_function

SQRT2 = math.sqrt(2.0)


def test_seedbank_critical_values(seedbank):
    crit = critical_speed(seedbank)
    assert crit.lambda_star == pytest.approx(0.982416, abs=1e-3)
    assert crit.mu_star == pytest.approx(-1.19103, abs=1e-3)
    assert crit.det_residual < 1e-9
    assert crit.certificate(seedbank)
    assert crit.lambda_star < HISTORICAL_UPPER_BOUND


def test_spore_critical_values(spore):
    crit = critical_speed(spore)
    assert crit.lambda_star == pytest.approx(1.0 / SQRT2, abs=1e-8)
    assert crit.mu_star == pytest.approx(-SQRT2, abs=1e-6)


def test_classical_critical_values(classical):
    crit = critical_speed(classical)
    assert crit.lambda_star == pytest.approx(SQRT2, abs=1e-10)
    assert crit.mu_star == pytest.approx(-SQRT2, abs=1e-6)


def test_critical_is_a_minimum_along_the_scan(seedbank):
    crit = critical_speed(seedbank)
    trace = scan_trace(seedbank)
    assert np.nanmin(trace["lambda"]) >= crit.lambda_star - 1e-12


def test_perron_vector_at_minimum_positive(seedbank, spore):
    for params in (seedbank, spore):
        d1, d2 = critical_speed(params).eigvec
        assert d1 > 0.0 and d2 > 0.0


def test_ordering_of_critical_speeds(seedbank):
    spore = critical_speed(seedbank.as_variant(Variant.SPORE)).lambda_star
    seed = critical_speed(seedbank).lambda_star
    classical = critical_speed(seedbank.as_variant(Variant.CLASSICAL)).lambda_star
    assert spore < seed < classical


def test_small_resuscitation_gives_small_speed():
    params = ModelParams(c=1.0, c_prime=1e-4, kappa=0.5)
    assert critical_speed(params).lambda_star < 0.05


@pytest.mark.parametrize("kappa", [1e-14, 5000.0], ids=["near_zero_end", "far_end"])
def test_minimum_outside_scan_raises(kappa):
    # classical mu* = -sqrt(2 kappa): -1.4e-7 and -100 both lie outside [-64, -1e-6]
    params = ModelParams(variant="classical", c=0.0, c_prime=0.0, kappa=kappa)
    with pytest.raises(SolverError) as excinfo:
        critical_speed(params)
    assert excinfo.value.scan["mu"]


def test_small_selection_minimum_inside_scan():
    params = ModelParams(variant="classical", c=0.0, c_prime=0.0, kappa=1e-7)
    crit = critical_speed(params)
    assert crit.mu_star == pytest.approx(-math.sqrt(2e-7), rel=1e-6)
    assert crit.lambda_star == pytest.approx(math.sqrt(2e-7), rel=1e-6)


def test_critical_speed_stable_under_finer_scan(seedbank, spore):
    for params in (seedbank, spore):
        coarse = critical_speed(params)
        fine = critical_speed(params, scan_points=512)
        assert fine.mu_star == pytest.approx(coarse.mu_star, abs=1e-8)
        assert fine.lambda_star == pytest.approx(coarse.lambda_star, abs=1e-12)


def test_log_lag_of_classical_front(classical):
    assert critical_speed(classical).log_lag == pytest.approx(3.0 / (2.0 * SQRT2), abs=1e-6)


def test_sweep_columns_and_identities():
    frame = sweep_critical(ModelParams.unit(), SweepAxis.S, [0.25, 1.0, 4.0])
    assert list(frame.columns) == SWEEP_COLUMNS + ["error"]
    root = np.sqrt(2.0 * frame["value"].to_numpy())
    np.testing.assert_allclose(frame["lambda_classical"], root, atol=1e-8)
    np.testing.assert_allclose(2.0 * frame["lambda_spore"], root, atol=1e-8)
    assert (frame["error"] == "").all()


def test_sweep_c_equals_cprime_spore_invariant():
    frame = sweep_critical(ModelParams.unit(), "c_equals_c_prime", [0.1, 1.0, 10.0], threads=2)
    np.testing.assert_allclose(frame["lambda_spore"], 1.0 / SQRT2, atol=1e-8)
    assert frame["value"].tolist() == [0.1, 1.0, 10.0]


def test_sweep_records_row_errors_instead_of_raising():
    frame = sweep_critical(ModelParams.unit(), SweepAxis.C, [1.0, -1.0])
    assert frame["error"].iloc[0] == ""
    assert frame["error"].iloc[1] != ""
    assert math.isnan(frame["lambda_seedbank"].iloc[1])


def test_speed_function_above_critical_everywhere(seedbank):
    crit = critical_speed(seedbank)
    for mu in np.linspace(-4.0, -0.1, 40):
        assert speed_function(float(mu), seedbank).lambda_plus >= crit.lambda_star - 1e-12

import math

import numpy as np
import pytest

from seedwave.core.errors import DomainError, InsufficientSamplesError, NotBracketedError
from seedwave.pde.fronts import (
    comoving_profile,
    front_position,
    front_speed,
    is_monotone,
    tail_decay_rate,
)
from seedwave.pde.grid import FieldPair, FrontTrace, Grid1D, exponential_ic, heaviside_ic


def test_grid_from_bounds():
    grid = Grid1D.from_bounds(-1.0, 1.0, 0.125)
    assert grid.n == 17
    assert grid.x[0] == -1.0 and grid.x_max == pytest.approx(1.0)


def test_grid_too_small_rejected():
    with pytest.raises(DomainError):
        Grid1D.from_bounds(-1.0, 1.0, 0.5)


def test_heaviside_on_small_grid():
    field = heaviside_ic(Grid1D.from_bounds(-1.0, 1.0, 0.125))
    np.testing.assert_array_equal(field.u, (field.grid.x >= 0.0).astype(float))
    np.testing.assert_array_equal(field.v, field.u)


def test_heaviside_requires_origin():
    with pytest.raises(DomainError):
        heaviside_ic(Grid1D.from_bounds(1.0, 5.0, 0.1))


def test_exponential_ic_tail():
    grid = Grid1D.from_bounds(-10.0, 20.0, 0.1)
    field = exponential_ic(grid, -0.6, (2.0, 1.0))
    far = grid.x > 10.0
    np.testing.assert_allclose(1.0 - field.u[far], 2.0 * np.exp(-0.6 * grid.x[far]), rtol=1e-2)
    assert is_monotone(field)
    with pytest.raises(DomainError):
        exponential_ic(grid, 0.3, (1.0, 1.0))


def test_field_shape_checked(small_grid):
    with pytest.raises(DomainError):
        FieldPair(u=np.zeros(3), v=np.zeros(3), t=0.0, grid=small_grid)


def test_front_position_interpolates(small_grid):
    u = np.clip((small_grid.x - 1.0) / 4.0 + 0.5, 0.0, 1.0)
    field = FieldPair(u=u, v=u.copy(), t=0.0, grid=small_grid)
    assert front_position(field, 0.5) == pytest.approx(1.0, abs=1e-12)
    assert front_position(field, 0.25) == pytest.approx(0.0, abs=1e-12)


def test_front_position_not_bracketed(small_grid):
    with pytest.raises(NotBracketedError):
        front_position(FieldPair.constant(small_grid, 1.0, 1.0))


def test_front_speed_linear_trace():
    trace = FrontTrace(level=0.5)
    for t in np.arange(0.0, 10.0, 0.5):
        trace.append(float(t), 0.8 * t + 3.0)
    slope, stderr = front_speed(trace, (2.0, 10.0))
    assert slope == pytest.approx(0.8)
    assert stderr == pytest.approx(0.0, abs=1e-6)


def test_front_speed_removes_logarithmic_delay():
    trace = FrontTrace(level=0.5)
    for t in np.arange(1.0, 40.25, 0.25):
        trace.append(float(t), 0.9 * t - 1.5 * math.log(t) + 2.0)
    plain, _ = front_speed(trace, (10.0, 40.0))
    corrected, _ = front_speed(trace, (10.0, 40.0), log_lag=1.5)
    assert plain < 0.9
    assert corrected == pytest.approx(0.9)


def test_front_speed_delay_needs_positive_times():
    trace = FrontTrace(level=0.5)
    for t in np.arange(0.0, 5.0, 0.5):
        trace.append(float(t), float(t))
    with pytest.raises(DomainError):
        front_speed(trace, (0.0, 5.0), log_lag=1.0)


def test_front_speed_skips_nan_and_needs_samples():
    trace = FrontTrace(level=0.5)
    for t in range(10):
        trace.append(float(t), math.nan if t < 5 else float(t))
    with pytest.raises(InsufficientSamplesError):
        front_speed(trace)


def test_front_trace_times_increase():
    trace = FrontTrace(level=0.5)
    trace.append(1.0, 0.0)
    with pytest.raises(DomainError):
        trace.append(1.0, 0.1)


def test_tail_decay_rate_recovers_exponent():
    grid = Grid1D.from_bounds(-10.0, 40.0, 0.1)
    field = exponential_ic(grid, -0.6, (2.0, 1.0))
    assert tail_decay_rate(field, "u", (10.0, 30.0)) == pytest.approx(-0.6, abs=2e-3)


def test_tail_decay_rate_needs_positive_tail(small_grid):
    with pytest.raises(InsufficientSamplesError):
        tail_decay_rate(FieldPair.constant(small_grid, 1.0, 1.0), "u", (5.0, 25.0))


def test_comoving_profile_shift_invariance():
    grid = Grid1D.from_bounds(-30.0, 30.0, 0.1)
    a = FieldPair(u=1.0 / (1.0 + np.exp(-grid.x)), v=np.zeros(grid.n), t=0.0, grid=grid)
    b = FieldPair(u=1.0 / (1.0 + np.exp(-(grid.x - 2.0))), v=np.zeros(grid.n), t=1.0, grid=grid)
    offsets, pa = comoving_profile(a, front_position(a), (-10.0, 10.0))
    _, pb = comoving_profile(b, front_position(b), (-10.0, 10.0))
    assert offsets[0] == pytest.approx(-10.0)
    assert np.max(np.abs(pa - pb)) < 1e-3


def test_is_monotone_detects_bump(small_grid):
    u = (small_grid.x >= 0.0).astype(float)
    u[10] = 0.5
    assert not is_monotone(FieldPair(u=u, v=u, t=0.0, grid=small_grid))

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from lqg import ScalarLqgSpec, default_grid, f_curve, f_value, riccati_residual, riccati_solve, sensitivity
from system import LqgDomainError


@pytest.fixture()
def unstable():
    return ScalarLqgSpec(a=2.0, b=1.0, sigma2=1.0, q=1.0, r=0.0)


def test_riccati_worked_example(unstable):
    derived = riccati_solve(unstable)
    assert derived.s == pytest.approx(1.0, abs=1e-12)
    assert derived.m == pytest.approx(1.0, abs=1e-12)
    assert derived.D_min == pytest.approx(1.0, abs=1e-12)
    assert derived.residual <= 1e-10
    assert f_value(unstable, derived, 2.0) == pytest.approx(1.5)
    assert f_curve(unstable, derived, [2.0]) == [(2.0, pytest.approx(1.5))]


def test_rate_approaches_instability_floor(unstable):
    derived = riccati_solve(unstable)
    assert f_value(unstable, derived, 1e6) == pytest.approx(1.0, abs=1e-5)


def test_domain_below_minimal_cost(unstable):
    derived = riccati_solve(unstable)
    with pytest.raises(LqgDomainError) as info:
        f_value(unstable, derived, 1.0)
    assert info.value.key == "D"
    with pytest.raises(LqgDomainError, match="D_min=1"):
        f_curve(unstable, derived, [3.0, 0.5])


def test_zero_dynamics_needs_no_rate():
    spec = ScalarLqgSpec(a=0.0, b=1.0, sigma2=2.0, q=1.0, r=1.0)
    derived = riccati_solve(spec)
    assert derived.s == pytest.approx(1.0)
    assert f_value(spec, derived, derived.D_min + 0.1) == 0.0


def test_free_state_cost_gives_zero_solution():
    spec = ScalarLqgSpec(a=0.5, b=1.0, sigma2=1.0, q=0.0, r=1.0)
    derived = riccati_solve(spec)
    assert derived.s == 0.0
    assert derived.m == 0.0
    assert derived.D_min == 0.0
    assert f_value(spec, derived, 0.3) == 0.0


def test_uncontrolled_stable_system():
    spec = ScalarLqgSpec(a=0.5, b=0.0, sigma2=1.0, q=1.0, r=1.0)
    derived = riccati_solve(spec)
    assert derived.s == pytest.approx(4.0 / 3.0)
    assert derived.m == 0.0
    assert derived.D_min == pytest.approx(4.0 / 3.0)
    with pytest.raises(LqgDomainError):
        riccati_solve(ScalarLqgSpec(a=1.5, b=0.0, sigma2=1.0, q=1.0, r=1.0))


@pytest.mark.parametrize("fields, key", [
    (dict(a=1.0, b=1.0, sigma2=0.0, q=1.0, r=1.0), "sigma2"),
    (dict(a=1.0, b=1.0, sigma2=1.0, q=-1.0, r=1.0), "q"),
    (dict(a=1.0, b=1.0, sigma2=1.0, q=1.0, r=-0.5), "r"),
    (dict(a=1.0, b=0.0, sigma2=1.0, q=1.0, r=0.0), "b"),
    (dict(a=float("nan"), b=1.0, sigma2=1.0, q=1.0, r=1.0), "a"),
])
def test_invalid_lqg_spec(fields, key):
    with pytest.raises(LqgDomainError) as info:
        ScalarLqgSpec(**fields)
    assert info.value.key == key


@settings(max_examples=1000, deadline=None)
@given(st.floats(min_value=-3.0, max_value=3.0), st.floats(min_value=0.1, max_value=3.0),
       st.floats(min_value=0.1, max_value=5.0), st.floats(min_value=0.0, max_value=5.0),
       st.floats(min_value=0.0, max_value=5.0))
def test_riccati_residual_is_small(a, b, sigma2, q, r):
    spec = ScalarLqgSpec(a=a, b=b, sigma2=sigma2, q=q, r=r)
    derived = riccati_solve(spec)
    assert derived.s >= 0.0
    assert riccati_residual(spec, derived.s) <= 1e-10 * max(1.0, derived.s)
    assert derived.m == pytest.approx(sensitivity(spec, derived.s))
    assert derived.D_min == pytest.approx(sigma2 * derived.s)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=1.05, max_value=3.0), st.floats(min_value=0.1, max_value=2.0),
       st.floats(min_value=0.1, max_value=2.0))
def test_curve_is_nonincreasing_and_convex(a, q, r):
    spec = ScalarLqgSpec(a=a, b=1.0, sigma2=1.0, q=q, r=r)
    derived = riccati_solve(spec)
    assume(derived.m > 0)
    grid = derived.D_min + np.linspace(0.05, 20.0, 80)
    values = np.array([F for _, F in f_curve(spec, derived, grid)])
    assert np.all(np.diff(values) <= 1e-12)
    assert np.all(np.diff(values, 2) >= -1e-9)
    assert values.min() >= math.log2(a) - 1e-12


def test_default_grid_lies_above_minimal_cost(unstable):
    derived = riccati_solve(unstable)
    grid = default_grid(derived, points=20)
    assert len(grid) == 20
    assert min(grid) > derived.D_min
    assert all(b > a for a, b in zip(grid, grid[1:]))
    assert len(f_curve(unstable, derived, grid)) == 20

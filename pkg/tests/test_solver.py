import numpy as np
import pytest
from numpy.testing import assert_allclose

from solver import (
    GridOracle, RateCostCurve, RateCostPoint, SolverOptions, binary_rate_distortion, blahut_arimoto,
    brute_force_fn, brute_force_lagrangian, check_gradient, exact_point,
    minimal_cost, minimal_cost_policy, mu_grid, rate_distortion, simplex_grid, solve_fn, solve_lagrangian,
    sweep_curve, zero_rate_point
)
from system import (
    CausalPolicy, InfeasibleCostError, InstanceTooLargeError, SolverConvergenceError, SpecValidationError,
    SystemSpec, evaluate_joint, load_spec
)
from solver.lagrangian import duality_gap
from system.joint_law import average_cost

from conftest import spec_path

# 해상도 0.1 격자에서 비용 제약을 맞추며 잃는 율
MARKOV_GRID_SLACK = 0.25
# 해상도 0.001 단일 단계 격자
FINE_GRID_SLACK = 5e-3


@pytest.fixture()
def one_step():
    """n = 1, 비대칭 비용 (최소 비용 0.08, 율 0 비용 0.68)"""
    return SystemSpec.markov(1, [0.6, 0.4], None, [[0.0, 1.0], [2.0, 0.2]], name="one_step")


def test_minimal_cost_dynamic_program(flip_n2):
    floor, policy = minimal_cost_policy(flip_n2)
    assert policy.is_deterministic()
    assert floor == pytest.approx(0.2075, abs=1e-9)
    law = evaluate_joint(flip_n2, policy)
    assert average_cost(law, flip_n2) == pytest.approx(floor)


def test_zero_rate_point_is_best_open_loop(flip_n2):
    point = zero_rate_point(flip_n2)
    assert point.rate == 0.0
    assert point.cost == pytest.approx(0.32)
    assert point.policy.ignores_state()


def test_infeasible_cost_level(flip_n2):
    with pytest.raises(InfeasibleCostError) as info:
        solve_fn(flip_n2, 0.1)
    assert info.value.minimal_cost == pytest.approx(minimal_cost(flip_n2))
    assert info.value.exit_code == 3


def test_negative_multiplier_rejected(flip_n2):
    with pytest.raises(SpecValidationError):
        solve_lagrangian(flip_n2, -1.0)


def test_zero_rate_region(flip_n2, quick_options):
    point = solve_fn(flip_n2, 0.5, quick_options)
    assert point.rate == 0.0
    assert point.cost <= 0.5


def test_cost_free_system_has_zero_curve(cost_free, quick_options):
    point = solve_fn(cost_free, 0.0, quick_options)
    assert point.rate == 0.0
    assert point.cost == 0.0


def test_single_action_system(single_action, quick_options):
    floor = minimal_cost(single_action)
    point = solve_fn(single_action, floor, quick_options)
    assert point.rate == 0.0
    assert point.cost == pytest.approx(floor)


def test_solver_matches_grid_oracle(flip_n2, quick_options):
    D = 0.3
    point = solve_fn(flip_n2, D, quick_options)
    assert point.cost <= D + 1e-12
    assert 0.0 < point.rate < 1.0
    # 마지막 단계의 최적 행은 (u_1, x_2) 에만 의존하므로 markov 격자가 최적점을 포함한다
    oracle = brute_force_fn(flip_n2, D, resolution=0.1, structure="markov")
    assert oracle.cost <= D + 1e-12
    assert point.rate <= oracle.rate + 1e-3
    assert oracle.rate <= point.rate + MARKOV_GRID_SLACK


def test_curve_is_monotone_and_convex(flip_n2, quick_options):
    opts = quick_options.quick(mu_exponents=(-4, 6))
    curve = sweep_curve(flip_n2, opts)
    assert curve.is_monotone()
    assert curve.is_convex()
    assert curve.costs()[0] == pytest.approx(minimal_cost(flip_n2))
    assert curve.rates()[-1] == 0.0
    assert curve.rate_at(0.1) == float("inf")
    assert curve.rate_at(1.0) == 0.0


def test_lower_envelope_drops_dominated_points():
    policy = CausalPolicy.uniform(2, 2, 2)
    points = [RateCostPoint(rate, cost, 0.0, policy) for rate, cost in
              [(1.0, 0.2), (0.6, 0.25), (0.55, 0.3), (0.0, 0.4), (0.7, 0.35)]]
    curve = RateCostCurve.lower_envelope(points)
    # (0.55, 0.3) 은 (0.6, 0.25)-(0, 0.4) 현 위에 있고 (0.7, 0.35) 는 지배된다
    assert [(p.rate, p.cost) for p in curve.points] == [(1.0, 0.2), (0.6, 0.25), (0.0, 0.4)]
    assert curve.is_convex()


def test_mu_grid_contains_zero_and_powers(quick_options):
    grid = mu_grid(quick_options.quick(mu_exponents=(-2, 2), extra_mus=[3.0]))
    assert grid == [0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0]


def test_restarts_are_deterministic(flip_n2, quick_options):
    first = solve_lagrangian(flip_n2, 2.0, quick_options)
    second = solve_lagrangian(flip_n2, 2.0, quick_options.quick(workers=2))
    assert first.rate == second.rate
    assert first.cost == second.cost


def test_strict_mode_raises_on_non_convergence(flip_n2):
    opts = SolverOptions(restarts=0, max_iterations=1, strict=True)
    with pytest.raises(SolverConvergenceError) as info:
        solve_lagrangian(flip_n2, 1.0, opts)
    assert info.value.exit_code == 4


def test_gradient_matches_finite_difference(flip_n2, rng):
    policy = CausalPolicy.random(2, 2, 2, rng, concentration=3.0)
    report = check_gradient(flip_n2, policy, 2.0, rng)
    assert report['passed'], report


def test_iid_source_matches_single_letter_rate_distortion(bernoulli_source, quick_options):
    D = 0.1
    point = solve_fn(bernoulli_source, D, quick_options)
    expected = binary_rate_distortion(0.2, D)
    assert point.rate == pytest.approx(expected, abs=2e-3)
    assert rate_distortion([0.8, 0.2], bernoulli_source.cost, D) == pytest.approx(expected, abs=1e-5)


@pytest.mark.parametrize("p", [0.1, 0.2, 0.3])
def test_bernoulli_sources_match_closed_form(p, quick_options):
    spec = SystemSpec.iid_source(2, [1.0 - p, p], [[0.0, 1.0], [1.0, 0.0]])
    point = solve_fn(spec, p / 2.0, quick_options)
    assert point.cost <= p / 2.0 + 1e-12
    assert point.rate == pytest.approx(binary_rate_distortion(p, p / 2.0), abs=2e-3)


def test_blahut_arimoto_large_slope_reaches_zero_distortion():
    rate, distortion, channel, q = blahut_arimoto([0.5, 0.5], [[0.0, 1.0], [1.0, 0.0]], 40.0)
    assert distortion < 1e-12
    assert rate == pytest.approx(1.0, abs=1e-9)
    assert_allclose(channel.sum(axis=1), 1.0)


def test_simplex_grid_and_size_limits(flip_n3):
    grid = simplex_grid(2, 0.25)
    assert grid.shape == (5, 2)
    assert_allclose(grid.sum(axis=1), 1.0)
    with pytest.raises(SpecValidationError):
        simplex_grid(2, 0.3)
    with pytest.raises(InstanceTooLargeError):
        GridOracle(flip_n3, 0.1, structure="full")


def test_brute_force_infeasible():
    spec = SystemSpec.markov(1, [0.5, 0.5], None, [[1.0, 2.0], [1.0, 2.0]])
    with pytest.raises(InfeasibleCostError):
        brute_force_fn(spec, 0.5, resolution=0.5)


# ----- 기준값 비교 -----

def test_single_step_matches_blahut_arimoto(one_step, quick_options):
    D = 0.3
    point = solve_fn(one_step, D, quick_options)
    reference = rate_distortion([0.6, 0.4], one_step.cost, D)
    assert reference > 0.0
    assert point.rate == pytest.approx(reference, abs=1e-3)


def test_single_step_matches_fine_grid(one_step, quick_options):
    D = 0.3
    point = solve_fn(one_step, D, quick_options)
    oracle = brute_force_fn(one_step, D, resolution=0.001, structure="full")
    assert point.rate <= oracle.rate + 1e-3
    assert oracle.rate <= point.rate + FINE_GRID_SLACK


@pytest.mark.parametrize("mu", [1.0, 4.0])
def test_lagrangian_matches_grid_objective(one_step, quick_options, mu):
    point = solve_lagrangian(one_step, mu, quick_options, extra_starts=(zero_rate_point(one_step).policy,))
    oracle = brute_force_lagrangian(one_step, mu, resolution=0.001, structure="full")
    assert point.converged
    assert point.objective <= oracle.objective + 1e-6
    assert oracle.objective <= point.objective + 1e-4


def test_large_multiplier_reaches_minimal_cost(flip_n2, quick_options):
    point = solve_lagrangian(flip_n2, 2.0 ** 20, quick_options)
    floor, policy = minimal_cost_policy(flip_n2)
    assert point.converged
    assert point.cost == pytest.approx(floor, abs=1e-6)
    assert point.rate <= exact_point(flip_n2, policy).rate + 1e-6


def test_rate_is_nonincreasing_in_cost_level(flip_n2, quick_options):
    levels = [0.21, 0.24, 0.27, 0.3, 0.33]
    rates = [solve_fn(flip_n2, D, quick_options).rate for D in levels]
    assert all(b <= a + 1e-6 for a, b in zip(rates, rates[1:]))
    assert rates[0] > rates[-2] > 0.0
    assert rates[-1] == 0.0


# ----- 수렴 판정 -----

def test_duality_gap_bounds_every_policy(flip_n2, rng):
    mu = 2.0
    policy = CausalPolicy.random(2, 2, 2, rng, concentration=2.0)
    before = evaluate_joint(flip_n2, policy)
    step = solve_lagrangian(flip_n2, mu, SolverOptions(max_iterations=1), starts=[policy])
    gap = duality_gap(before, step.law, flip_n2.horizon)
    assert 0.0 <= gap < float("inf")
    lower = step.objective - gap
    oracle = brute_force_lagrangian(flip_n2, mu, resolution=0.25, structure="markov")
    assert lower <= oracle.objective + 1e-12
    best = solve_lagrangian(flip_n2, mu, SolverOptions(restarts=2))
    assert lower <= best.objective + 1e-12


def test_degenerate_marginal_gives_no_certificate(flip_n2):
    law = evaluate_joint(flip_n2, CausalPolicy.constant(2, 2, 2, 0))
    assert duality_gap(law, law, 2) == float("inf")


def test_default_options_converge_under_strict(flip_n2):
    point = solve_fn(flip_n2, 0.3, SolverOptions(strict=True))
    assert point.converged
    assert point.cost <= 0.3 + 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("name", ["flip_n3", "flip_n4"])
def test_default_options_converge_on_longer_horizons(name):
    spec = load_spec(spec_path(name))
    opts = SolverOptions(strict=True)
    point = solve_fn(spec, 0.255333, opts)
    assert point.converged
    curve = sweep_curve(spec, opts.quick(mu_exponents=(-10, -4)))
    assert all(p.converged for p in curve.raw_points if p.source == "lagrangian")

import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coding import build_codebooks
from simulation import (
    achievability_bound, build_cloud, eps_admissible, eps_penalty, first_order_ratio, gap_shrinkage_table,
    largest_admissible_eps, logarithmic_gap, per_coordinate_overhead, run_trial, run_trials, synthesize,
    verify_sandwich
)
from simulation.bounds import SFRL_OFFSET
from solver import SolverOptions
from system import SpecValidationError, load_spec

from conftest import spec_path

D = 0.3


@pytest.fixture(scope="module")
def bundle():
    spec = load_spec(spec_path("flip_n2"))
    return synthesize(spec, D, eps=0.05, gamma=0.25, seed=7, opts=SolverOptions().quick(restarts=1),
                      cloud_size=60, M=256)


@pytest.fixture(scope="module")
def report(bundle):
    return run_trials(bundle, trials=400, seed=7)


# ----- 상한 산술 -----

def test_achievability_bound_at_zero():
    assert achievability_bound(0.0, 1) == pytest.approx(np.log2(SFRL_OFFSET) + 3.0)
    assert achievability_bound(1.0, 4, gamma=0.25) == pytest.approx(1.0 + np.log2(4.4) + 2.25 + 0.25)
    with pytest.raises(SpecValidationError):
        logarithmic_gap(-0.1, 2)


def test_first_order_ratio():
    assert first_order_ratio(0.0, 3) == float("inf")
    assert first_order_ratio(100.0, 3) < first_order_ratio(10.0, 3)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.0, max_value=20.0), st.floats(min_value=0.01, max_value=2.0))
def test_largest_admissible_eps_is_tight(F, gamma):
    eps = largest_admissible_eps(F, gamma)
    assert 0.0 <= eps <= gamma / 2.0
    assert eps_admissible(F, eps, gamma)
    if eps < gamma / 2.0:
        assert not eps_admissible(F, eps + 1e-9, gamma)


def test_eps_penalty_grows_with_eps():
    assert eps_penalty(0.5, 0.0) == pytest.approx(0.0)
    assert eps_penalty(0.5, 0.01) < eps_penalty(0.5, 0.02)
    assert largest_admissible_eps(0.5, 0.0) == 0.0


@pytest.mark.parametrize("F_tilde, n", [(0.0, 1), (0.4, 2), (3.0, 10)])
def test_gap_shrinks_with_dimension(F_tilde, n):
    table = gap_shrinkage_table(F_tilde, n, dimensions=(1, 2, 4, 8, 16))
    overheads = [row['overhead'] for row in table]
    assert all(b < a for a, b in zip(overheads, overheads[1:]))
    assert table[0]['overhead'] == pytest.approx(logarithmic_gap(F_tilde, n))
    assert table[-1]['upper'] == pytest.approx(F_tilde + per_coordinate_overhead(F_tilde, 16, n))
    with pytest.raises(SpecValidationError):
        per_coordinate_overhead(F_tilde, 0, n)


# ----- 합성 -----

def test_synthesized_scheme_meets_cost(bundle):
    assert bundle.exact_cost() <= D + 1e-9
    assert bundle.selector.d_eps <= D
    assert bundle.selector.r_eps <= bundle.selector.r_bar + bundle.selector.eps_used + 1e-12
    assert bundle.codebooks.kraft_ok()
    assert bundle.mixture.holds
    assert bundle.cloud.failure_fraction <= 0.05
    assert bundle.F > 0.0
    assert bundle.rate_target == pytest.approx(achievability_bound(bundle.F, 2, 0.25))
    digest = bundle.digest()
    assert digest['seeds']['streams'] == {'dynamics': 0, 'tables': 1, 'q': 2}
    assert digest['eps_admissible']


def test_sandwich_holds(report):
    ledger = verify_sandwich(report)
    assert ledger.passed, ledger.failures()
    assert report.mismatches == 0
    assert sum(report.q_counts) == 400
    assert report.F <= report.directed_information + 1e-3
    assert report.directed_information <= report.action_entropy + 1e-12
    assert report.action_entropy <= report.exact_rate + 1e-12
    assert report.exact_rate <= report.bound
    assert abs(report.empirical_cost - report.exact_cost) <= 3 * report.cost_se + 1e-12


def test_trials_do_not_depend_on_scheduling(bundle):
    serial = run_trials(bundle, trials=40, seed=11)
    parallel = run_trials(bundle, trials=40, seed=11, workers=3)
    assert serial.rows == parallel.rows
    assert run_trial(bundle, 5, 11) == serial.rows[5][1:]


def test_exact_only_report(bundle):
    report = run_trials(bundle, trials=0)
    assert report.empirical_rate is None
    ledger = verify_sandwich(report)
    assert not any(entry.name.startswith("empirical") for entry in ledger.entries)
    assert ledger.passed
    with pytest.raises(SpecValidationError):
        run_trials(bundle, trials=-1)


def test_trials_csv(report, tmp_path):
    path = report.write_csv(str(tmp_path / "trials.csv"))
    lines = open(path, encoding="utf-8").read().splitlines()
    assert lines[0] == "trial,bits,cost,q"
    assert len(lines) == 401


def test_corrupted_codebook_breaks_achievability_only(bundle):
    likely = int(np.argmax(bundle.law.action_marginal(1)))
    stage = np.full(2, 1.0)
    stage[likely] = 2.0 ** -100
    wrong = build_codebooks(np.outer(stage, stage) / np.outer(stage, stage).sum())
    broken = dataclasses.replace(bundle, codebooks=wrong)
    ledger = verify_sandwich(run_trials(broken, trials=0))
    assert not ledger.passed
    assert not ledger.entry("achievability").passed
    assert not ledger.entry("coding.stage1").passed
    for name in ("converse", "converse.rate_vs_entropy", "converse.entropy_vs_information",
                 "converse.information_vs_F", "cost"):
        assert ledger.entry(name).passed, name


def test_cost_free_system_needs_no_bits(cost_free):
    bundle = synthesize(cost_free, 0.0, seed=3, opts=SolverOptions().quick(restarts=1), cloud_size=10, M=16)
    assert bundle.F == 0.0
    assert bundle.exact_rate() == 0.0
    report = run_trials(bundle, trials=50, seed=3)
    assert all(bits == 0 for _, bits, _, _ in report.rows)
    assert verify_sandwich(report).passed


def test_single_action_system(single_action):
    bundle = synthesize(single_action, 1.0, seed=3, opts=SolverOptions().quick(restarts=1), cloud_size=10, M=4)
    assert bundle.exact_rate() == 0.0
    report = run_trials(bundle, trials=200, seed=3)
    assert report.empirical_rate == 0.0
    assert verify_sandwich(report).passed


# ----- 기본 옵션 합성 (n = 3, 4) -----

MID_CURVE_D = 0.255333


@pytest.mark.slow
@pytest.mark.parametrize("name", ["flip_n3", "flip_n4"])
def test_default_synthesis_meets_cost_and_sandwich(name):
    spec = load_spec(spec_path(name))
    bundle = synthesize(spec, MID_CURVE_D, seed=7)
    assert bundle.exact_cost() <= MID_CURVE_D + 1e-9
    assert bundle.selector.d_eps <= MID_CURVE_D
    assert bundle.cloud.size >= 190
    assert bundle.digest()['selector']['eps_used'] >= bundle.eps
    report = run_trials(bundle, trials=2000, seed=7)
    ledger = verify_sandwich(report)
    assert ledger.passed, ledger.failures()
    assert report.mismatches == 0


def test_cloud_draws_continue_the_seed_stream(bundle):
    spec, point = bundle.spec, bundle.point
    whole, _ = build_cloud(spec, point, 12, 64, seed=7)
    first, _ = build_cloud(spec, point, 5, 64, seed=7)
    rest, _ = build_cloud(spec, point, 7, 64, seed=7, start=5)
    assert [z.to_dict() for z in whole] == [z.to_dict() for z in first + rest]

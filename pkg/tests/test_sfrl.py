import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from sfrl import (
    ProposalTable, build_stage, estimate_stage_entropies, induced_actions, induced_policy, pushforward,
    pushforward_tv, select, sfrl_bound, stage_entropy_given_z
)
from system import (
    CausalPolicy, SfrlContextError, SfrlTruncationError, SpecValidationError, SystemSpec, evaluate_joint
)
from system.joint_law import stage_informations
from utils import seed_stream

from conftest import FLIP_COST, FLIP_TRANSITION

CROSSOVER = 0.11


@pytest.fixture()
def interior(flip_n2):
    policy = CausalPolicy.random(2, 2, 2, np.random.default_rng(5), concentration=4.0)
    return policy, evaluate_joint(flip_n2, policy)


@pytest.fixture()
def crossover_pair():
    """균등 이진 상태와 교차 확률 0.11 의 조건부 행동"""
    spec = SystemSpec.markov(1, [0.5, 0.5], None, [[0.0, 1.0], [1.0, 0.0]], name="crossover")
    row = [1.0 - CROSSOVER, CROSSOVER]
    policy = CausalPolicy([np.array([row, row[::-1]])], 2, 2)
    return policy, evaluate_joint(spec, policy)


def test_selection_takes_smallest_weight():
    table = ProposalTable([1, 0, 1], [0.5, 1.0, 2.0], [0.5, 0.5])
    assert_array_equal(table.first_index, [1, 0])
    assert table.select_action(np.array([0.5, 0.5])) == 1
    assert table.select_action(np.array([1.0, 0.0])) == 0
    assert table.select_index(np.array([1.0, 0.0])) == 1
    # 1.0 * 0.5/0.9 < 0.5 * 0.5/0.1
    assert table.select_action(np.array([0.9, 0.1])) == 0


def test_selection_is_batched():
    table = ProposalTable([1, 0, 1], [0.5, 1.0, 2.0], [0.5, 0.5])
    rows = np.array([[0.5, 0.5], [1.0, 0.0], [0.0, 1.0]])
    assert_array_equal(table.select_action(rows), [1, 0, 1])


def test_truncation_failure_is_marked():
    table = ProposalTable([0, 0], [0.3, 0.9], [0.9, 0.1])
    assert table.select_index(np.array([0.0, 1.0])) == -1
    assert table.select_action(np.array([0.0, 1.0])) == -1


def test_empty_table_rejected():
    with pytest.raises(SpecValidationError):
        ProposalTable([], [], [1.0])


def test_select_errors(flip_n2, interior):
    policy, law = interior
    stage = build_stage(2, law, policy, M=64, seed=1)
    with pytest.raises(SfrlContextError):
        select(stage, [0, 1], [5])
    failing = build_stage(1, law, policy, M=4, seed=1)
    failing.contexts[()] = ProposalTable([0, 0], [0.1, 0.2], [0.5, 0.5])
    failing.conditional = np.array([[0.0, 1.0], [0.0, 1.0]])
    with pytest.raises(SfrlTruncationError):
        select(failing, [0], [])


def test_truncation_must_cover_alphabet(interior):
    policy, law = interior
    with pytest.raises(SpecValidationError):
        build_stage(1, law, policy, M=1)


def test_tables_come_from_their_own_stream(interior):
    policy, law = interior
    first = build_stage(2, law, policy, M=32, seed=seed_stream(11, "tables", 0, 2))
    second = build_stage(2, law, policy, M=32, seed=seed_stream(11, "tables", 0, 2))
    other = build_stage(2, law, policy, M=32, seed=seed_stream(11, "tables", 1, 2))
    for key in first.contexts:
        assert_array_equal(first.contexts[key].proposals, second.contexts[key].proposals)
        assert_array_equal(first.contexts[key].times, second.contexts[key].times)
    assert any(not np.array_equal(first.contexts[k].times, other.contexts[k].times) for k in first.contexts)


def test_induced_policy_is_deterministic(flip_n2, interior):
    policy, law = interior
    stages = [build_stage(t, law, policy, M=256, seed=seed_stream(3, "tables", 0, t)) for t in (1, 2)]
    induced = induced_policy(stages)
    assert induced.is_deterministic()
    actions = induced_actions(stages[0])
    assert actions.shape == (2,)
    assert set(actions.tolist()) <= {0, 1}


def test_pushforward_preserves_context_mass(interior):
    policy, law = interior
    stage = build_stage(2, law, policy, M=256, seed=9)
    joint = pushforward(stage)
    assert joint.shape == (2, 2)
    assert_allclose(joint.sum(axis=-1), law.action_marginal(1))
    entropy = stage_entropy_given_z(stage, law)
    assert 0.0 <= entropy <= 1.0 + 1e-12


def test_pushforward_matches_conditional_law(interior):
    policy, law = interior
    for t in (1, 2):
        assert pushforward_tv(t, law, policy, M=1024, seed=4, tables=10000) <= 0.01


def test_stage_entropy_within_bound(interior):
    policy, law = interior
    estimate = estimate_stage_entropies(law, policy, M=256, seed=2, tables=200)
    for stage in estimate['stages']:
        assert stage.failures == 0
        assert stage.holds()
        assert stage.mean <= stage.bound
    assert estimate['summed']['holds']


def test_bound_at_zero_information():
    assert sfrl_bound(0.0) == pytest.approx(np.log2(3.4) + 1.0)


# ----- 교차 확률 0.11 쌍 -----

def test_crossover_pair_fidelity(crossover_pair):
    policy, law = crossover_pair
    assert pushforward_tv(1, law, policy, M=1024, seed=0, tables=10000) <= 0.01


def test_crossover_pair_selection_over_state_draws(crossover_pair):
    policy, law = crossover_pair
    rng = np.random.default_rng(42)
    states = rng.integers(0, 2, size=10 ** 5)
    counts = np.zeros((2, 2))
    for k, x in enumerate(states):
        stage = build_stage(1, law, policy, M=256, seed=seed_stream(42, "tables", k, 1))
        counts[x, select(stage, [int(x)], [])] += 1
    empirical = counts / counts.sum(axis=1, keepdims=True)
    distance = 0.5 * float(np.abs(empirical - policy.stages[0]).sum(axis=1) @ (counts.sum(axis=1) / len(states)))
    assert distance <= 0.02


def test_crossover_pair_entropy_bound(crossover_pair):
    policy, law = crossover_pair
    information = stage_informations(law)[0]
    assert information == pytest.approx(1.0 + CROSSOVER * np.log2(CROSSOVER)
                                        + (1 - CROSSOVER) * np.log2(1 - CROSSOVER), abs=1e-12)
    estimate = estimate_stage_entropies(law, policy, M=1024, seed=0, tables=1000)
    stage = estimate['stages'][0]
    assert stage.tables == 1000
    assert stage.failures == 0
    assert stage.mean <= stage.bound + 2.0 * stage.standard_error
    assert stage.slack > 0.0
    assert stage.bound == pytest.approx(information + np.log2(information + 3.4) + 1.0)


# ----- 자명한 경우 -----

def test_single_action_alphabet(single_action):
    policy = CausalPolicy.uniform(2, 2, 1)
    law = evaluate_joint(single_action, policy)
    for t in (1, 2):
        stage = build_stage(t, law, policy, M=8, seed=seed_stream(1, "tables", 0, t))
        for table in stage.contexts.values():
            assert_array_equal(table.proposals, 0)
        assert np.all(induced_actions(stage) == 0)
        assert stage_entropy_given_z(stage, law) == 0.0


def test_state_blind_policy_takes_first_proposal(flip_n2):
    second = np.empty((2, 2, 2, 2))
    second[:, 0] = [0.6, 0.4]
    second[:, 1] = [0.2, 0.8]
    policy = CausalPolicy([np.array([[0.3, 0.7], [0.3, 0.7]]), second], 2, 2)
    law = evaluate_joint(flip_n2, policy)
    for k in range(20):
        for t in (1, 2):
            stage = build_stage(t, law, policy, M=64, seed=seed_stream(6, "tables", k, t))
            for u_hist, table in stage.contexts.items():
                rows = stage.conditional[(slice(None), *[v for u in u_hist for v in (u, slice(None))])] \
                    if u_hist else stage.conditional
                assert np.all(table.select_index(rows) == 0)
            assert stage_entropy_given_z(stage, law) == pytest.approx(0.0, abs=1e-12)


def test_tables_ignore_state_labels(interior):
    policy, law = interior
    spec = SystemSpec.markov(2, [0.7, 0.3], FLIP_TRANSITION, FLIP_COST)
    swapped = SystemSpec.markov(2, [0.3, 0.7], np.array(FLIP_TRANSITION)[::-1, :, ::-1],
                                np.array(FLIP_COST)[::-1])
    first, second = policy.stages
    relabeled = CausalPolicy([first[::-1].copy(), second[::-1, :, ::-1].copy()], 2, 2)
    law = evaluate_joint(spec, policy)
    swapped_law = evaluate_joint(swapped, relabeled)
    assert_allclose(swapped_law.action_marginal(), law.action_marginal(), atol=1e-15)
    for t in (1, 2):
        stage = build_stage(t, law, policy, M=128, seed=seed_stream(8, "tables", 0, t))
        other = build_stage(t, swapped_law, relabeled, M=128, seed=seed_stream(8, "tables", 0, t))
        for key, table in stage.contexts.items():
            assert_array_equal(other.contexts[key].proposals, table.proposals)
            assert_array_equal(other.contexts[key].times, table.times)
        actions = induced_actions(stage)
        flipped = actions[::-1] if t == 1 else actions[::-1, :, ::-1]
        assert_array_equal(induced_actions(other), flipped)

"""
조건부 강함수 표현(SFRL) 단계 구성과 행동 선택

문맥 u_[t-1] 마다 독립 제안 테이블을 두며, 전체 테이블 모음이 Z_t 이다.
테이블은 상태 난수와 분리된 전용 시드 스트림에서만 추출된다.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from config import ERROR_MESSAGES, SFRL_CONFIG
from system.exceptions import SfrlContextError, SfrlTruncationError, SpecValidationError
from system.information import entropy_bits
from system.kernels import history_shape
from system.policy import CausalPolicy, interleave
from utils import seed_stream
from .proposal import ProposalTable


@dataclass
class SfrlStage:
    """t 단계 SFRL 실현 (문맥별 제안 테이블 + 조건부 정책 + 이력 질량)"""
    t: int
    contexts: dict
    conditional: np.ndarray
    reach: np.ndarray
    n_states: int
    n_actions: int
    truncation: int
    seed: tuple = field(default=None)

    def table(self, u_hist):
        key = tuple(int(u) for u in u_hist)
        if key not in self.contexts:
            raise SfrlContextError(f"no proposal table for action history {key}", stage=self.t)
        return self.contexts[key]


def _context_index(u_hist):
    """전체 이력 배열에서 u 축을 고정하고 x 축은 남기는 인덱스"""
    index = []
    for u in u_hist:
        index.extend([slice(None), int(u)])
    index.append(slice(None))
    return tuple(index)


def build_stage(t, law, policy, M=None, seed=0):
    """
    t 단계 SFRL 테이블 생성

    Args:
        t (int): 단계 (1부터)
        law (JointLaw): 정책이 유도한 결합 법칙
        policy (CausalPolicy): 조건부 법칙 P(U_t|X_[t],U_[t-1]) 의 출처
        M (int): 문맥당 제안 개수 (>= |U|)
        seed: 정수 시드 (tables 스트림) 또는 numpy Generator

    Returns:
        SfrlStage: 질량이 있는 문맥마다 테이블을 가진 단계
    """
    M = SFRL_CONFIG["truncation"] if M is None else int(M)
    if M < law.n_actions:
        raise SpecValidationError(f"truncation M={M} must be at least |U|={law.n_actions}", stage=t)
    if policy.stages[t - 1].shape != history_shape(2 * t, law.n_states, law.n_actions):
        raise SpecValidationError("policy and law alphabets do not match", stage=t)
    rng = seed if isinstance(seed, np.random.Generator) else seed_stream(seed, "tables", t)
    marginal = law.action_conditional(t)
    context_mass = law.action_marginal(t - 1) if t > 1 else np.array(1.0)
    contexts = {}
    for u_hist in itertools.product(range(law.n_actions), repeat=t - 1):
        if context_mass[u_hist] <= 0:
            continue  # g 가 조회되지 않는 문맥
        contexts[u_hist] = ProposalTable.draw(marginal[u_hist], M, rng)
    return SfrlStage(t, contexts, policy.stages[t - 1], law.prefix_marginal(2 * t - 1),
                     law.n_states, law.n_actions, M, seed if not isinstance(seed, np.random.Generator) else None)


def select(stage, x_hist, u_hist):
    """
    U_t = g_t(x_[t], u_[t-1], Z_t)

    Raises:
        SfrlContextError: 테이블이 없는 문맥
        SfrlTruncationError: 모든 가중치가 inf
    """
    table = stage.table(u_hist)
    row = stage.conditional[interleave(x_hist, u_hist)]
    action = int(table.select_action(row))
    if action < 0:
        raise SfrlTruncationError(ERROR_MESSAGES["truncation"], stage=stage.t)
    return action


def induced_actions(stage):
    """
    모든 이력에 대한 결정적 사상 g_t(., ., z_t) 배열 (형태 history_shape(2t-1))

    테이블이 없는 문맥은 -2, 절단 실패는 -1 로 표시한다.
    """
    actions = np.full(history_shape(2 * stage.t - 1, stage.n_states, stage.n_actions), -2, dtype=int)
    for u_hist, table in stage.contexts.items():
        index = _context_index(u_hist)
        actions[index[:-1]] = table.select_action(stage.conditional[index])
    return actions


def induced_policy(stages):
    """
    단계 목록이 유도하는 결정적 CausalPolicy

    도달 불가능한 이력은 조건부 분포의 최빈 행동으로 채운다.

    Raises:
        SfrlTruncationError: 도달 가능한 이력에서 절단 실패
    """
    chosen = []
    for stage in stages:
        actions = induced_actions(stage)
        failed = (actions < 0) & (stage.reach > 0)
        if np.any(failed):
            raise SfrlTruncationError(
                f"{ERROR_MESSAGES['truncation']} on {int(failed.sum())} reachable histories", stage=stage.t)
        fallback = np.argmax(stage.conditional, axis=-1)
        chosen.append(np.where(actions >= 0, actions, fallback))
    return CausalPolicy.from_actions(chosen, stages[0].n_states, stages[0].n_actions)


def pushforward(stage, actions=None):
    """
    고정 테이블에서의 (u_[t-1], u_t) 결합 분포

    이력 법칙 P(x_[t], u_[t-1]) 을 결정적 사상으로 밀어낸다.
    """
    actions = induced_actions(stage) if actions is None else actions
    failed = (actions < 0) & (stage.reach > 0)
    if np.any(failed):
        raise SfrlTruncationError(ERROR_MESSAGES["truncation"], stage=stage.t)
    onehot = np.eye(stage.n_actions)[np.maximum(actions, 0)] * stage.reach[..., None]
    x_axes = tuple(range(0, 2 * stage.t - 1, 2))
    return onehot.sum(axis=x_axes)


def stage_entropy_given_z(stage, law=None):
    """
    H(U_t | U_[t-1], Z_t = 이 테이블) (비트)

    테이블이 고정되면 U_t 는 (X_[t], U_[t-1]) 의 결정적 함수이므로
    정확한 이력 법칙의 밀어내기 분포 엔트로피와 같다.
    """
    if law is not None and law.prefix_marginal(2 * stage.t - 1).shape != stage.reach.shape:
        raise SpecValidationError("stage was not built from this law", stage=stage.t)
    joint = pushforward(stage)
    return float(max(entropy_bits(joint) - entropy_bits(joint.sum(axis=-1)), 0.0))

"""
결합 법칙 P(X_[n], U_[n]) 와 그 위의 정확한 평가 연산
"""

import numpy as np

from config import MODEL_CONFIG
from .exceptions import SpecValidationError
from .information import (
    action_marginal, conditional_action_entropy_terms, directed_information_array,
    entropy_bits, expected_stage_costs, prefix_marginal, stage_information_terms
)


def forward_product(kernel_arrays, policy_arrays):
    """
    커널과 정책의 전방 곱으로 궤적 확률 텐서 생성

    정책 배열에 앞쪽 배치 축이 있으면 결과에도 그대로 남는다.
    """
    law = None
    for kernel, policy in zip(kernel_arrays, policy_arrays):
        law = kernel if law is None else law[..., None] * kernel
        law = law[..., None] * policy
    return law


class JointLaw:
    """궤적 (x_[n], u_[n]) 위의 확률 테이블 (조밀 텐서, 축은 교차 배치)"""

    def __init__(self, table, horizon, n_states, n_actions, validate=True):
        self.table = np.asarray(table, dtype=float)
        self.horizon = int(horizon)
        self.n_states = int(n_states)
        self.n_actions = int(n_actions)
        if validate:
            self.validate()

    def validate(self):
        if np.any(self.table < 0):
            raise SpecValidationError("joint law has negative entries")
        deviation = abs(self.total_mass() - 1.0)
        if deviation > MODEL_CONFIG["mass_tolerance"]:
            raise SpecValidationError(f"joint law mass deviates from 1 by {deviation:.3g}")

    def total_mass(self):
        return float(self.table.sum())

    def prefix_marginal(self, length):
        """앞쪽 length 개 축의 주변 분포 (x1,u1,...)"""
        return prefix_marginal(self.table, self.horizon, length)

    def action_marginal(self, t=None):
        """U_[t] 주변 분포, t 생략 시 U_[n]"""
        return action_marginal(self.table, self.horizon, self.horizon if t is None else t)

    def action_conditional(self, t):
        """
        P(U_t | U_[t-1]) 배열, 형태 (|U|,)*(t-1)+(|U|,)

        질량이 0인 문맥의 행은 0으로 채운다.
        """
        joint = self.action_marginal(t)
        context = joint.sum(axis=-1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(context > 0, joint / np.where(context > 0, context, 1.0), 0.0)

    def state_marginal(self):
        """X_[n] 주변 분포 (u 축 합산)"""
        u_axes = tuple(range(1, 2 * self.horizon, 2))
        return self.table.sum(axis=u_axes)

    def support(self):
        """0이 아닌 궤적 (x_[n], u_[n], 확률) 생성기"""
        for index in zip(*np.nonzero(self.table)):
            yield tuple(int(v) for v in index[0::2]), tuple(int(v) for v in index[1::2]), float(self.table[index])

    def mix(self, other, weight):
        """weight * self + (1 - weight) * other"""
        return JointLaw(weight * self.table + (1.0 - weight) * other.table,
                        self.horizon, self.n_states, self.n_actions)

    def action_entropy(self):
        """H(U_[n])"""
        return float(entropy_bits(self.action_marginal()))


def evaluate_joint(spec, policy, budget=None):
    """
    시스템 명세와 인과 정책으로부터 결합 법칙 계산

    Args:
        spec (SystemSpec): 시스템 명세
        policy (CausalPolicy): 인과 정책
        budget (int): 궤적 원소 상한 (None 이면 설정값)

    Returns:
        JointLaw: 질량 1 의 궤적 테이블

    Raises:
        SpecValidationError: 알파벳/지평 불일치
        BudgetExceededError: 예산 초과
    """
    policy.check_compatible(spec)
    spec.check_budget(budget)
    kernels = [spec.kernel_stage(t) for t in range(1, spec.horizon + 1)]
    table = forward_product(kernels, policy.stages)
    return JointLaw(table, spec.horizon, spec.n_states, spec.n_actions)


def average_cost(law, spec):
    """(1/n) sum_t E[c(X_t, U_t)]"""
    return float(sum(expected_stage_costs(law.table, law.horizon, spec.cost)) / law.horizon)


def stage_costs(law, spec):
    """단계별 E[c(X_t, U_t)] 목록"""
    return [float(c) for c in expected_stage_costs(law.table, law.horizon, spec.cost)]


def directed_information(law):
    """I(X_[n] -> U_[n]) = sum_t I(X_[t]; U_t | U_[t-1]) (비트)"""
    return float(directed_information_array(law.table, law.horizon))


def stage_informations(law):
    """단계별 I(X_[t]; U_t | U_[t-1]) 목록 (비트)"""
    return [float(term) for term in stage_information_terms(law.table, law.horizon)]


def conditional_action_entropies(law):
    """단계별 H(U_t | U_[t-1]) 목록 (비트)"""
    return [float(term) for term in conditional_action_entropy_terms(law.table, law.horizon)]

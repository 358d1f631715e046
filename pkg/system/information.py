"""
정확한 주변 분포로부터 엔트로피와 방향성 정보량 계산

모든 함수는 뒤쪽 2n 개 축이 궤적 축 (x1,u1,...,xn,un) 인 배열을 받으며,
앞쪽 축은 배치 축으로 취급한다. 로그 밑은 2, 0 log 0 = 0.
"""

import numpy as np
from scipy.special import entr

LN2 = np.log(2.0)


def entropy_bits(p, axes=None):
    """확률 배열의 엔트로피 (비트); axes 가 None 이면 전체 합"""
    values = entr(np.asarray(p, dtype=float))
    return values.sum(axis=axes) / LN2


def binary_entropy(p):
    """이진 엔트로피 h(p) (비트)"""
    return entropy_bits(np.stack([np.asarray(p, dtype=float), 1.0 - np.asarray(p, dtype=float)]), axes=0)


def prefix_marginal(p, n, length):
    """앞쪽 length 개 궤적 축의 주변 분포"""
    drop = 2 * n - length
    if drop == 0:
        return p
    return p.sum(axis=tuple(range(-drop, 0)))


def action_marginal(p, n, t):
    """U_[t] 의 주변 분포 (x 축을 모두 합산)"""
    prefix = prefix_marginal(p, n, 2 * t)
    if t == 0:
        return prefix
    x_axes = tuple(2 * i - 2 * t for i in range(t))
    return prefix.sum(axis=x_axes)


def _trailing_entropy(p, k):
    """뒤쪽 k 개 축에 대한 엔트로피"""
    if k == 0:
        return np.zeros(np.shape(p))
    return entropy_bits(p, axes=tuple(range(-k, 0)))


def action_prefix_entropies(p, n):
    """H(U_[t]) , t = 0..n"""
    return [_trailing_entropy(action_marginal(p, n, t), t) for t in range(n + 1)]


def history_entropies(p, n):
    """H(궤적 접두부 길이 L), L = 0..2n"""
    return [_trailing_entropy(prefix_marginal(p, n, length), length) for length in range(2 * n + 1)]


def stage_information_terms(p, n):
    """
    단계별 I(X_[t]; U_t | U_[t-1]) 목록 (비트)

    I_t = H(U_t|U_[t-1]) - H(U_t|X_[t],U_[t-1]) 를 접두부 엔트로피 차로 계산한다.
    부동소수 오차로 생기는 미세한 음수는 0 으로 자른다.
    """
    h_actions = action_prefix_entropies(p, n)
    h_history = history_entropies(p, n)
    terms = []
    for t in range(1, n + 1):
        conditional = h_actions[t] - h_actions[t - 1]
        given_states = h_history[2 * t] - h_history[2 * t - 1]
        terms.append(np.maximum(conditional - given_states, 0.0))
    return terms


def directed_information_array(p, n):
    """I(X_[n] -> U_[n]) (배치 지원)"""
    return sum(stage_information_terms(p, n))


def conditional_action_entropy_terms(p, n):
    """단계별 H(U_t | U_[t-1]) (배치 지원)"""
    h_actions = action_prefix_entropies(p, n)
    return [np.maximum(h_actions[t] - h_actions[t - 1], 0.0) for t in range(1, n + 1)]


def expected_stage_costs(p, n, cost):
    """단계별 E[c(X_t, U_t)] (배치 지원)"""
    costs = []
    for t in range(1, n + 1):
        prefix = prefix_marginal(p, n, 2 * t)
        pair = prefix.sum(axis=tuple(range(-2 * t, -2))) if t > 1 else prefix
        costs.append((pair * cost).sum(axis=(-2, -1)))
    return costs


def mutual_information(pxy):
    """2차원 결합 분포의 상호정보량 (비트)"""
    pxy = np.asarray(pxy, dtype=float)
    return float(entropy_bits(pxy.sum(axis=1)) + entropy_bits(pxy.sum(axis=0)) - entropy_bits(pxy))

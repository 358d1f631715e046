"""
율-비용 샌드위치 한계 산술

F_n(D) <= R_n(D) <= F_n(D) + log2(F_n(D) + 3.4) + 2 + 1/n
"""

import numpy as np

from system.exceptions import SpecValidationError

SFRL_OFFSET = 3.4


def logarithmic_gap(F, n):
    """log2(F + 3.4) + 2 + 1/n"""
    if F < 0 or n < 1:
        raise SpecValidationError(f"need F >= 0 and n >= 1, got F={F}, n={n}")
    return float(np.log2(F + SFRL_OFFSET) + 2.0 + 1.0 / n)


def achievability_bound(F, n, gamma=0.0):
    """F + log2(F + 3.4) + 2 + 1/n + gamma (bits/단계)"""
    return float(F) + logarithmic_gap(F, n) + float(gamma)


def eps_penalty(F, eps):
    """2 eps + log2(F + eps + 3.4) - log2(F + 3.4)"""
    return float(2.0 * eps + np.log2(F + eps + SFRL_OFFSET) - np.log2(F + SFRL_OFFSET))


def eps_admissible(F, eps, gamma):
    """eps 여유가 gamma 안에 들어가는지 (근사 최적 정책의 율 여유 조건)"""
    return eps_penalty(F, eps) <= gamma


def largest_admissible_eps(F, gamma, iterations=200):
    """
    eps_admissible 를 만족하는 가장 큰 eps (이분법)

    벌점은 eps 에 대해 증가하고 2 eps 이상이므로 해는 [0, gamma/2] 안에 있다.
    """
    if gamma <= 0:
        return 0.0
    low, high = 0.0, gamma / 2.0
    if eps_admissible(F, high, gamma):
        return high
    for _ in range(iterations):
        mid = 0.5 * (low + high)
        if eps_admissible(F, mid, gamma):
            low = mid
        else:
            high = mid
    return low


def first_order_ratio(F, n):
    """상한 / F (F 가 클수록 1 에 가까워지는 추세, 보고용)"""
    if F <= 0:
        return float("inf")
    return achievability_bound(F, n) / F


def per_coordinate_overhead(F_tilde, k, n):
    """k 차원 i.i.d. 소스의 좌표당 추가 오버헤드 log2(k F~ + 3.4)/k + 2/k + 1/(k n)"""
    if k < 1:
        raise SpecValidationError(f"dimension k must be at least 1, got {k}", key="k")
    return float(np.log2(k * F_tilde + SFRL_OFFSET) / k + 2.0 / k + 1.0 / (k * n))


def gap_shrinkage_table(F_tilde, n, dimensions=(1, 2, 4, 8)):
    """차원 k 별 좌표당 상한과 오버헤드 표"""
    rows = []
    for k in dimensions:
        overhead = per_coordinate_overhead(F_tilde, k, n)
        rows.append({'k': int(k), 'overhead': overhead, 'upper': F_tilde + overhead})
    return rows

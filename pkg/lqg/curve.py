"""
무한 지평 스칼라 LQG 율-비용 곡선

F(D) = [log2|a| + 1/2 log2(1 + sigma2 m / (D - D_min))]^+,  D > D_min
"""

import math

import numpy as np

from config import ERROR_MESSAGES
from system.exceptions import LqgDomainError
from .riccati import riccati_solve


def f_value(spec, derived, D):
    """한 점의 F(D) (비트)"""
    if not D > derived.D_min:
        raise LqgDomainError(f"{ERROR_MESSAGES['lqg_domain']}: D={D:.9g} <= D_min={derived.D_min:.9g}", key="D")
    if spec.a == 0:
        return 0.0
    value = math.log2(abs(spec.a)) + 0.5 * math.log2(1.0 + spec.sigma2 * derived.m / (D - derived.D_min))
    return max(value, 0.0)


def f_curve(spec, derived=None, grid=()):
    """
    D 격자 위 (D, F(D)) 목록

    Raises:
        LqgDomainError: 격자에 D <= D_min 인 점이 있을 때 (D_min 값을 메시지에 포함)
    """
    derived = derived or riccati_solve(spec)
    below = [D for D in grid if not D > derived.D_min]
    if below:
        raise LqgDomainError(
            f"{ERROR_MESSAGES['lqg_domain']}: grid point D={below[0]:.9g} is not above D_min={derived.D_min:.9g}",
            key="D")
    return [(float(D), f_value(spec, derived, D)) for D in grid]


def default_grid(derived, points=50, span=100.0):
    """D_min 위로 로그 간격 격자 (D - D_min in [1e-3, span] x max(D_min, 1))"""
    scale = max(derived.D_min, 1.0)
    return list(derived.D_min + scale * np.geomspace(1e-3, span, points))

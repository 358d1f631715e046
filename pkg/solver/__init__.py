"""
율-비용 하한 F_n(D) 솔버 모듈

주요 기능:
- solve_lagrangian: 고정 mu 의 라그랑주 문제 (엔트로피 거울 하강)
- solve_fn: 비용 한도 D 에서의 F_n(D) 와 근사 최적 정책
- sweep_curve: mu 격자 전체의 하측 볼록 포락선
- brute_force_fn: 작은 인스턴스용 격자 전수 탐색 오라클
- blahut_arimoto / rate_distortion: 단일 문자 율-왜곡 기준값

사용 예시:
    from solver import SolverOptions, solve_fn

    point = solve_fn(spec, 0.3, SolverOptions(restarts=2))
    print(point.rate, point.cost)
"""

from .lagrangian import (
    SolverOptions,
    RateCostPoint,
    solve_lagrangian,
    exact_point,
    lagrangian_gradient,
    check_gradient
)
from .fn_solver import (
    RateCostCurve,
    minimal_cost,
    minimal_cost_policy,
    zero_rate_point,
    mu_grid,
    sweep_curve,
    solve_fn
)
from .brute_force import GridOracle, brute_force_fn, brute_force_lagrangian, simplex_grid
from .blahut_arimoto import blahut_arimoto, rate_distortion, binary_rate_distortion

__all__ = [
    'SolverOptions',
    'RateCostPoint',
    'solve_lagrangian',
    'exact_point',
    'lagrangian_gradient',
    'check_gradient',
    'RateCostCurve',
    'minimal_cost',
    'minimal_cost_policy',
    'zero_rate_point',
    'mu_grid',
    'sweep_curve',
    'solve_fn',
    'GridOracle',
    'brute_force_fn',
    'brute_force_lagrangian',
    'simplex_grid',
    'blahut_arimoto',
    'rate_distortion',
    'binary_rate_distortion'
]

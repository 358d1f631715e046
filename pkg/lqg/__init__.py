"""
스칼라 LQG 율-비용 해석 모듈

주요 기능:
- riccati_solve: 안정화 Riccati 해 s, m, D_min
- f_curve: 닫힌 형태 F(D) 곡선

사용 예시:
    from lqg import ScalarLqgSpec, riccati_solve, f_curve

    spec = ScalarLqgSpec(a=2.0, b=1.0, sigma2=1.0, q=1.0, r=0.0)
    print(f_curve(spec, riccati_solve(spec), [2.0]))  # [(2.0, 1.5)]
"""

from .riccati import LqgDerived, ScalarLqgSpec, riccati_residual, riccati_solve, sensitivity
from .curve import default_grid, f_curve, f_value

__all__ = [
    'LqgDerived',
    'ScalarLqgSpec',
    'riccati_residual',
    'riccati_solve',
    'sensitivity',
    'default_grid',
    'f_curve',
    'f_value'
]

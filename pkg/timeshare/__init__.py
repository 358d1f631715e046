"""
보조 난수 Z_[n] 을 이진 시분할 변수 Q 로 축약하는 모듈

주요 기능:
- evaluate_zpoint: 실현 z 하나의 (r, d)
- caratheodory_reduce: 점군 무게중심 -> 두 점 혼합 선택기
- mixture_entropy: H(U_[n]|Q), H(U_[n]), h(lambda)

사용 예시:
    from timeshare import caratheodory_reduce

    selector = caratheodory_reduce([(1, 0.5), (3, 1.5)], D=1.0, eps=0.01)
    print(selector.lam, selector.r_eps, selector.d_eps)
"""

from .zpoint import ZPoint, evaluate_zpoint
from .caratheodory import TimeShareSelector, barycenter, caratheodory_reduce, convex_hull, orientation
from .mixture import MixtureEntropy, mixture_entropy, mixture_law

__all__ = [
    'ZPoint',
    'evaluate_zpoint',
    'TimeShareSelector',
    'barycenter',
    'caratheodory_reduce',
    'convex_hull',
    'orientation',
    'MixtureEntropy',
    'mixture_entropy',
    'mixture_law'
]

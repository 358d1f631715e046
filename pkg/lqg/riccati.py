"""
스칼라 LQG 대수 Riccati 방정식

X_{t+1} = a X_t + b U_t + W_t, W_t ~ N(0, sigma2), c(x, u) = q x^2 + r u^2
s = q + a^2 s - a^2 m,  m = b^2 s^2 / (r + b^2 s),  D_min = sigma2 s
"""

import math
from dataclasses import dataclass

from system.exceptions import LqgDomainError

RESIDUAL_TOLERANCE = 1e-10


@dataclass(frozen=True)
class ScalarLqgSpec:
    """스칼라 선형 시스템과 이차 비용"""
    a: float
    b: float
    sigma2: float
    q: float
    r: float

    def __post_init__(self):
        for name in ("a", "b", "sigma2", "q", "r"):
            if not math.isfinite(getattr(self, name)):
                raise LqgDomainError(f"{name} must be finite", key=name)
        if self.sigma2 <= 0:
            raise LqgDomainError(f"noise variance must be positive, got {self.sigma2}", key="sigma2")
        if self.q < 0 or self.r < 0:
            raise LqgDomainError("cost weights q and r must be nonnegative", key="q" if self.q < 0 else "r")
        if self.r == 0 and self.b == 0:
            raise LqgDomainError("b must be nonzero when r = 0", key="b")

    def to_dict(self):
        return {'a': self.a, 'b': self.b, 'sigma2': self.sigma2, 'q': self.q, 'r': self.r}


@dataclass(frozen=True)
class LqgDerived:
    """Riccati 해 s, 민감도 m, 최소 비용 D_min"""
    s: float
    m: float
    D_min: float
    residual: float

    def to_dict(self):
        return {'s': self.s, 'm': self.m, 'D_min': self.D_min, 'residual': self.residual}


def sensitivity(spec, s):
    """m = b^2 s^2 / (r + b^2 s) (분모가 0 이면 0)"""
    denominator = spec.r + spec.b ** 2 * s
    return spec.b ** 2 * s ** 2 / denominator if denominator > 0 else 0.0


def riccati_residual(spec, s):
    """|s - (q + a^2 s - a^2 m)|"""
    return abs(s - (spec.q + spec.a ** 2 * s - spec.a ** 2 * sensitivity(spec, s)))


def _stabilizing_root(spec):
    """
    b^2 s^2 + (r - q b^2 - a^2 r) s - q r = 0 의 가장 큰 음이 아닌 근

    상쇄 오차를 피하도록 근의 공식 형태를 부호에 따라 고른다.
    """
    a, b, q, r = spec.a, spec.b, spec.q, spec.r
    if b == 0:
        # s = q + a^2 s
        if a * a < 1:
            return q / (1.0 - a * a)
        if q == 0:
            return 0.0
        raise LqgDomainError(f"no nonnegative Riccati root: b=0 with |a|={abs(a):g} >= 1 and q={q:g} > 0")
    A = b * b
    B = r - q * b * b - a * a * r
    C = -q * r
    discriminant = B * B - 4.0 * A * C
    if discriminant < 0:
        raise LqgDomainError(f"no real Riccati root (discriminant {discriminant:.6g})")
    root = math.sqrt(discriminant)
    if B > 0:
        s = -2.0 * C / (B + root)
    else:
        s = (-B + root) / (2.0 * A)
    if s < 0:
        raise LqgDomainError(f"no nonnegative Riccati root (discriminant {discriminant:.6g})")
    for _ in range(3):
        slope = 2.0 * A * s + B
        if slope == 0:
            break
        polished = s - (A * s * s + B * s + C) / slope
        if polished < 0 or not math.isfinite(polished):
            break
        s = polished
    return s


def riccati_solve(spec):
    """
    안정화 Riccati 해와 파생량 계산

    Args:
        spec (ScalarLqgSpec): 스칼라 LQG 명세

    Returns:
        LqgDerived: s, m, D_min (잔차 <= 1e-10 max(1, s))

    Raises:
        LqgDomainError: 음이 아닌 근이 없거나 잔차 검사 실패
    """
    s = _stabilizing_root(spec)
    residual = riccati_residual(spec, s)
    if residual > RESIDUAL_TOLERANCE * max(1.0, s):
        raise LqgDomainError(f"Riccati residual {residual:.3g} exceeds tolerance at s={s:.12g}")
    return LqgDerived(s, sensitivity(spec, s), spec.sigma2 * s, residual)

"""
점군 무게중심을 두 점 혼합으로 축약하는 Caratheodory 선택기

무게중심 (r_bar, d_bar) 에서 비용 한도를 지키는 인증점을 만들고,
conv(점군) ∩ {d <= D} 에서 율이 가장 작은 극점을 두 점군 원소의 혼합으로 표현한다.
무게중심이 D 이하이면 그 극점은 직사각형 S = (-inf, r_bar + eps] x (-inf, D] 안에 있다.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from config import TIMESHARE_CONFIG
from system.exceptions import BarycenterInfeasibleError, SpecValidationError
from utils import logger


@dataclass
class TimeShareSelector:
    """
    이진 시분할 선택기

    Q = 0 (확률 lam) 이면 z0, Q = 1 이면 z1 을 사용한다.
    """
    z0: int
    z1: int
    lam: float
    r_eps: float
    d_eps: float
    r_bar: float
    d_bar: float
    eps: float
    D: float
    case: str
    certificate: tuple
    point0: object = None
    point1: object = None
    candidates: int = field(default=0)

    def holds(self):
        """d_eps <= D 와 r_eps <= r_bar + eps"""
        return self.d_eps <= self.D and self.r_eps <= self.r_bar + self.eps

    @property
    def eps_used(self):
        """실제로 쓴 율 여유 max(eps, r_eps - r_bar)"""
        return max(self.eps, self.r_eps - self.r_bar)

    def to_dict(self):
        return {
            'z0': self.z0,
            'z1': self.z1,
            'lambda': self.lam,
            'r_eps': self.r_eps,
            'd_eps': self.d_eps,
            'r_bar': self.r_bar,
            'd_bar': self.d_bar,
            'eps': self.eps,
            'eps_used': self.eps_used,
            'D': self.D,
            'case': self.case,
            'certificate': list(self.certificate)
        }


def orientation(a, b, c):
    """세 점의 정확한 방향 (Fraction 외적 부호)"""
    ax, ay = Fraction(a[0]), Fraction(a[1])
    value = (Fraction(b[0]) - ax) * (Fraction(c[1]) - ay) - (Fraction(b[1]) - ay) * (Fraction(c[0]) - ax)
    return (value > 0) - (value < 0)


def convex_hull(coords):
    """
    단조 사슬 볼록 껍질 (반시계 방향 꼭짓점 인덱스)

    공선 점은 제거하며, 모든 점이 같으면 한 점, 공선이면 두 끝점을 돌려준다.
    같은 좌표가 여러 번 있으면 가장 작은 인덱스를 쓴다.
    """
    unique = {}
    for index, point in enumerate(coords):
        unique.setdefault(tuple(point), index)
    order = sorted(unique, key=lambda p: (p[0], p[1]))
    if len(order) <= 2:
        return [unique[p] for p in order]

    def chain(points):
        hull = []
        for p in points:
            while len(hull) >= 2 and orientation(hull[-2], hull[-1], p) <= 0:
                hull.pop()
            hull.append(p)
        return hull

    lower = chain(order)
    upper = chain(list(reversed(order)))
    vertices = lower[:-1] + upper[:-1]
    return [unique[p] for p in vertices]


def barycenter(coords, weights):
    """정확한 유리수 합으로 계산한 가중 무게중심 (반올림은 마지막 한 번)"""
    fractions = [Fraction(float(w)) for w in weights]
    total = sum(fractions)
    r_bar = sum(w * Fraction(float(r)) for w, r in zip(fractions, coords[:, 0])) / total
    d_bar = sum(w * Fraction(float(d)) for w, d in zip(fractions, coords[:, 1])) / total
    return float(r_bar), float(d_bar)


def _certificate(coords, weights, D, eps, tolerance, tie):
    """
    무게중심으로부터 d <= D, r <= r_bar + eps/2 인 인증점 계산

    Returns:
        tuple: (r_bar, d_bar, 인증점, 경우 이름)
    """
    r_bar, d_bar = barycenter(coords, weights)
    if d_bar > D + tolerance:
        raise BarycenterInfeasibleError(d_bar, D)
    if d_bar < D - tie:
        return r_bar, d_bar, (r_bar, d_bar), "strict"

    below = np.flatnonzero(coords[:, 1] < D)
    if below.size == 0:
        # 경우 1: D 아래 점이 없으면 무게중심 자체가 D 이하여야 한다
        if d_bar > D:
            raise BarycenterInfeasibleError(d_bar, D, reason="no cloud point lies below D")
        return r_bar, d_bar, (r_bar, d_bar), "boundary-no-lower-point"

    # 경우 2: d0 < D 인 점 쪽으로 beta 만큼 이동, delta 는 0.1 부터 절반씩 축소
    ratio = np.abs(coords[below, 0] - r_bar) / np.maximum(D - coords[below, 1], np.finfo(float).tiny)
    z0 = int(below[np.argmin(ratio)])
    r0, d0 = coords[z0]
    gap = max(d_bar - D, 0.0)
    delta = TIMESHARE_CONFIG["initial_delta"]
    while delta / (D - d0) * abs(r0 - r_bar) > eps / 2.0 and delta > TIMESHARE_CONFIG["min_delta"]:
        delta /= 2.0
    beta = gap / (d_bar - d0) if gap > 0 else 0.0
    point = ((1.0 - beta) * r_bar + beta * r0, min((1.0 - beta) * d_bar + beta * d0, D))
    if gap > delta:
        # 표본 오차가 delta 보다 크면 r_bar + eps 는 보장되지 않고 실제 여유를 eps_used 로 보고한다
        logger.debug(f"무게중심 초과 {gap:.3g} > delta {delta:.3g}; 인증점 율 {point[0]:.6f}")
        return r_bar, d_bar, point, "boundary-shifted"
    return r_bar, d_bar, point, "boundary-with-lower-point"


def _candidates(coords, hull, D):
    """conv ∩ {d <= D} 의 극점 후보 (i, j, lam, r, d); lam 은 i 의 가중치"""
    found = []
    for i in hull:
        r, d = coords[i]
        if d <= D:
            found.append((i, i, 1.0, r, d))
    edges = list(zip(hull, hull[1:] + hull[:1])) if len(hull) > 2 else ([tuple(hull)] if len(hull) == 2 else [])
    for a, b in edges:
        (ra, da), (rb, db) = coords[a], coords[b]
        if (da - D) * (db - D) < 0:
            lam = (D - db) / (da - db)
            found.append((a, b, lam, lam * ra + (1.0 - lam) * rb, D))
    return found


def _clamp(coords, i, j, lam, D, r_limit):
    """부동소수 혼합 좌표가 D 와 r_limit 를 넘지 않도록 lam 을 ulp 단위로 이동"""
    (ri, di), (rj, dj) = coords[i], coords[j]
    d = lam * di + (1.0 - lam) * dj
    toward = 1.0 if di < dj else 0.0
    while d > D and lam != toward:
        lam = float(np.nextafter(lam, toward))
        d = lam * di + (1.0 - lam) * dj
    r = lam * ri + (1.0 - lam) * rj
    toward = 1.0 if ri < rj else 0.0
    for _ in range(64):
        if r <= r_limit or lam == toward:
            break
        candidate = float(np.nextafter(lam, toward))
        if candidate * di + (1.0 - candidate) * dj > D:
            break
        lam = candidate
        r = lam * ri + (1.0 - lam) * rj
        d = lam * di + (1.0 - lam) * dj
    return lam, r, d


def caratheodory_reduce(points, weights=None, D=0.0, eps=0.0, tolerance=0.0):
    """
    가중 점군을 두 점 시분할로 축약

    Args:
        points (list): ZPoint 또는 (r, d) 쌍 목록
        weights (array): 표본 가중치 (None 이면 균등)
        D (float): 비용 한도
        eps (float): 율 여유 (>= 0)
        tolerance (float): 무게중심 비용이 D 를 넘어도 되는 허용치

    Returns:
        TimeShareSelector: conv(점군) ∩ {d <= D} 에서 율이 최소인 두 점 혼합.
            d_eps <= D 는 항상, r_eps <= r_bar + eps 는 무게중심이 D 이하일 때 성립

    Raises:
        BarycenterInfeasibleError: 무게중심 비용이 D + tolerance 초과이거나 d <= D 인 점이 없음
    """
    if not points:
        raise SpecValidationError("empty point cloud", key="points")
    if eps < 0:
        raise SpecValidationError("eps must be nonnegative", key="eps")
    coords = np.array([p.coords if hasattr(p, "coords") else tuple(p) for p in points], dtype=float)
    ids = [p.z_id if hasattr(p, "z_id") else index for index, p in enumerate(points)]
    weights = np.full(len(points), 1.0 / len(points)) if weights is None else np.asarray(weights, dtype=float)
    weights = weights / weights.sum()
    tie = TIMESHARE_CONFIG["tie_tolerance"]

    r_bar, d_bar, certificate, case = _certificate(coords, weights, D, eps, tolerance, tie)
    hull = convex_hull(coords)
    found = _candidates(coords, hull, D)
    if not found:
        raise BarycenterInfeasibleError(d_bar, D, reason="no cloud point has cost <= D")

    # 율 최소, 같으면 비용이 낮은 쪽, 그다음 id 순
    best_r = min(c[3] for c in found)
    top = [c for c in found if c[3] <= best_r + tie]
    i, j, lam, _, _ = min(top, key=lambda c: (c[4], min(ids[c[0]], ids[c[1]]), max(ids[c[0]], ids[c[1]])))
    if i == j:
        lam = 1.0
    r_limit = max(r_bar + eps, best_r)
    lam, r_eps, d_eps = _clamp(coords, i, j, lam, D, r_limit)
    if lam == 0.0:
        i, j, lam = j, j, 1.0
    selector = TimeShareSelector(ids[i], ids[j], lam, r_eps, d_eps, r_bar, d_bar, eps, D, case, certificate,
                                 points[i] if hasattr(points[i], "z_id") else None,
                                 points[j] if hasattr(points[j], "z_id") else None,
                                 len(found))
    logger.debug(f"시분할: z0={selector.z0}, z1={selector.z1}, lambda={lam:.6f}, "
                 f"(r, d)=({r_eps:.6f}, {d_eps:.6f}), case={case}")
    return selector

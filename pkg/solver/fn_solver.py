"""
율-비용 하한 F_n(D) 계산

mu 격자 {0} U {2^k} 를 훑고 기하 평균 이분법으로 목표 비용 D 를 맞춘다.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from system.exceptions import InfeasibleCostError, SpecValidationError
from system.kernels import history_shape
from system.policy import CausalPolicy
from utils import logger
from .lagrangian import RateCostPoint, SolverOptions, exact_point, solve_lagrangian

FEASIBILITY_SLACK = 1e-12


def minimal_cost_policy(spec):
    """
    이력 위 동적 계획법으로 최소 평균 비용과 결정적 최적 정책 계산

    Returns:
        tuple: (최소 평균 비용, CausalPolicy)
    """
    n = spec.horizon
    kernels = [spec.kernel_stage(t) for t in range(1, n + 1)]
    actions = [None] * n
    carry = None
    for t in range(n, 0, -1):
        future = 0.0 if t == n else (kernels[t] * carry).sum(axis=-1)
        q = np.broadcast_to(spec.cost + future, history_shape(2 * t, spec.n_states, spec.n_actions))
        actions[t - 1] = np.argmin(q, axis=-1)
        carry = q.min(axis=-1)
    total = float((kernels[0] * carry).sum())
    return total / n, CausalPolicy.from_actions(actions, spec.n_states, spec.n_actions)


def minimal_cost(spec):
    """최소 달성 가능 평균 비용"""
    return minimal_cost_policy(spec)[0]


def zero_rate_point(spec, budget=None):
    """
    최적 개루프 행동열 (율 0 에서의 최소 비용)

    상태를 무시하는 정책의 비용은 행동열 혼합에 대해 선형이므로
    결정적 행동열 중 최선이 율 0 최적점이다.
    """
    best = None
    for sequence in itertools.product(range(spec.n_actions), repeat=spec.horizon):
        policy = CausalPolicy.open_loop(sequence, spec.n_states, spec.n_actions)
        point = exact_point(spec, policy, 0.0, source="zero-rate", budget=budget)
        if best is None or point.cost < best.cost:
            best = point
    best.rate = 0.0 if best.rate < 1e-12 else best.rate
    return best


@dataclass
class RateCostCurve:
    """비용 증가 순의 율-비용 점 목록 (하측 볼록 포락선)"""
    points: list
    raw_points: list = field(default_factory=list)

    def __post_init__(self):
        self.points = sorted(self.points, key=lambda p: (p.cost, p.rate))

    @classmethod
    def lower_envelope(cls, points):
        """
        점들의 하측 볼록 포락선

        같은 비용이면 낮은 율을 먼저 두고, 율이 줄지 않는 점은 버린 뒤
        단조 사슬로 하측 볼록 껍질을 만든다.
        """
        ordered = sorted(points, key=lambda p: (p.cost, p.rate))
        frontier = []
        for point in ordered:
            if frontier and point.rate >= frontier[-1].rate:
                continue
            frontier.append(point)
        hull = []
        for point in frontier:
            while len(hull) >= 2 and _cross(hull[-2], hull[-1], point) <= 0:
                hull.pop()
            hull.append(point)
        return cls(hull, list(points))

    def costs(self):
        return [p.cost for p in self.points]

    def rates(self):
        return [p.rate for p in self.points]

    def rate_at(self, D):
        """포락선 위 선형 보간 값 (최소 비용 미만이면 inf)"""
        costs, rates = self.costs(), self.rates()
        if not costs or D < costs[0] - FEASIBILITY_SLACK:
            return float("inf")
        if D >= costs[-1]:
            return rates[-1]
        return float(np.interp(D, costs, rates))

    def is_monotone(self, tolerance=1e-6):
        rates = self.rates()
        return all(b <= a + tolerance for a, b in zip(rates, rates[1:]))

    def is_convex(self, tolerance=1e-6):
        """연속한 세 점마다 가운데 점이 현 아래(허용 오차 내)인지"""
        for a, b, c in zip(self.points, self.points[1:], self.points[2:]):
            if c.cost == a.cost:
                continue
            weight = (b.cost - a.cost) / (c.cost - a.cost)
            if b.rate > (1 - weight) * a.rate + weight * c.rate + tolerance:
                return False
        return True

    def rows(self):
        """(D, F_n(D), mu) 행 목록"""
        return [(p.cost, p.rate, p.mu) for p in self.points]


def _cross(a, b, c):
    return (b.cost - a.cost) * (c.rate - a.rate) - (b.rate - a.rate) * (c.cost - a.cost)


def mu_grid(opts):
    """{0} U {2^k : k in 범위} U 추가 mu"""
    low, high = opts.mu_exponents
    return sorted({0.0, *(2.0 ** k for k in range(low, high + 1)), *opts.extra_mus})


def sweep_curve(spec, opts=None, mus=None):
    """
    mu 격자 전체를 풀어 하측 볼록 포락선 RateCostCurve 반환

    Args:
        spec (SystemSpec): 시스템 명세
        opts (SolverOptions): 솔버 옵션
        mus (list): 직접 지정한 mu 목록 (None 이면 격자)
    """
    opts = opts or SolverOptions()
    mus = mu_grid(opts) if mus is None else sorted(mus)
    points = [zero_rate_point(spec, opts.budget)]
    for mu in mus:
        points.append(solve_lagrangian(spec, mu, opts, extra_starts=(points[0].policy,)))
    low_cost, policy = minimal_cost_policy(spec)
    points.append(exact_point(spec, policy, float("inf"), source="min-cost", budget=opts.budget))
    curve = RateCostCurve.lower_envelope(points)
    logger.info(f"율-비용 곡선: {len(mus)}개 mu, 포락선 점 {len(curve.points)}개")
    return curve


def _bracket(spec, D, opts, solve):
    """
    비용이 D 를 넘는 점(low)과 D 이하인 점(high) 찾기

    비용은 mu 에 대해 비증가이므로 mu = 1 에서 시작해 D 를 가로지를 때까지 위나 아래로 이동한다.
    """
    low_exp, high_exp = opts.mu_exponents
    k = min(max(0, low_exp), high_exp)
    point = solve(2.0 ** k)
    if point.cost <= D + FEASIBILITY_SLACK:
        high = point
        for k in range(k - 1, low_exp - 1, -1):
            point = solve(2.0 ** k)
            if point.cost > D + FEASIBILITY_SLACK:
                return point, high
            high = point
        return None, high
    low = point
    for k in range(k + 1, opts.max_mu_exponent + 1):
        if k > high_exp:
            logger.debug(f"mu 격자 확장: 2^{k}")
        point = solve(2.0 ** k)
        if point.cost <= D + FEASIBILITY_SLACK:
            return low, point
        low = point
    return low, None


def solve_fn(spec, D, opts=None):
    """
    F_n(D): 비용 D 이하에서 (1/n) I(X->U) 를 최소화하는 정책

    Args:
        spec (SystemSpec): 시스템 명세
        D (float): 비용 한도
        opts (SolverOptions): 솔버 옵션

    Returns:
        RateCostPoint: 비용 <= D 인 점 중 율이 최소인 점 (동률이면 낮은 비용)

    Raises:
        InfeasibleCostError: D 가 최소 달성 비용보다 작을 때 (최소 비용 포함)
    """
    opts = opts or SolverOptions()
    if not D >= 0:
        raise SpecValidationError(f"cost level must be nonnegative, got {D}", key="D")
    floor, floor_policy = minimal_cost_policy(spec)
    if D < floor - FEASIBILITY_SLACK:
        raise InfeasibleCostError(D, floor)

    zero = zero_rate_point(spec, opts.budget)
    if zero.cost <= D + FEASIBILITY_SLACK:
        logger.info(f"D={D:.6g} >= 율 0 비용 {zero.cost:.6g}: F_n(D) = 0")
        return zero

    evaluated = []

    def solve(mu):
        point = solve_lagrangian(spec, mu, opts, extra_starts=(zero.policy,))
        evaluated.append(point)
        return point

    low, high = _bracket(spec, D, opts, solve)
    if high is not None:
        low = low or zero
        for _ in range(opts.max_bisections):
            if D - high.cost <= opts.cost_tolerance:
                break
            mid = np.sqrt(low.mu * high.mu) if low.mu > 0 else high.mu / 2.0
            point = solve(mid)
            if point.cost <= D + FEASIBILITY_SLACK:
                high = point
            else:
                low = point

    candidates = [p for p in evaluated if p.cost <= D + FEASIBILITY_SLACK]
    if not candidates:
        # D 가 최소 비용에 붙어 있는 경우 결정적 최소 비용 정책으로 대체
        fallback = exact_point(spec, floor_policy, float("inf"), source="min-cost", budget=opts.budget)
        candidates = [fallback]
    best = min(candidates, key=lambda p: (p.rate, p.cost))
    logger.info(f"F_n({D:.6g}) = {best.rate:.6f} bits (cost {best.cost:.6f}, mu {best.mu:.6g}, "
                f"{len(evaluated)} solves)")
    return best

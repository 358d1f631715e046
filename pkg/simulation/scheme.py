"""
부호화-제어 방식(scheme) 합성

근사 최적 정책 -> 단계별 SFRL 점군 -> 두 점 시분할 -> 혼합 법칙에 맞춘 코드북
"""

from dataclasses import dataclass, field

import numpy as np

from config import SFRL_CONFIG, SIMULATION_CONFIG, TIMESHARE_CONFIG
from coding import build_codebooks
from sfrl import build_stage, induced_policy, sfrl_bound
from solver import SolverOptions, solve_fn
from system.exceptions import SfrlTruncationError, VerificationError
from system.joint_law import average_cost, directed_information
from timeshare import caratheodory_reduce, evaluate_zpoint, mixture_entropy, mixture_law
from utils import logger, seed_stream
from .bounds import achievability_bound, eps_admissible, eps_penalty, largest_admissible_eps


@dataclass
class CloudSummary:
    """SFRL 점군 요약 (평균 율/비용과 표준오차, 절단 실패 수)"""
    size: int
    failures: int
    r_bar: float
    d_bar: float
    r_se: float
    d_se: float

    @property
    def failure_fraction(self):
        total = self.size + self.failures
        return self.failures / total if total else 0.0

    def to_dict(self):
        return {
            'size': self.size,
            'failures': self.failures,
            'failure_fraction': self.failure_fraction,
            'r_bar': self.r_bar,
            'd_bar': self.d_bar,
            'r_se': self.r_se,
            'd_se': self.d_se
        }


@dataclass
class SchemeBundle:
    """
    (n, R, D) 부호화-제어 방식 한 벌

    Attributes:
        point (RateCostPoint): F_n(D) 를 주는 근사 최적 정책
        zpoints (list): 절단 실패 없이 만들어진 점군 원소
        selector (TimeShareSelector): Q 분포와 두 실현 z0, z1
        law (JointLaw): 혼합 결합 법칙 (Q 에 대해 평균)
        codebooks (CodebookSet): law 에 맞춘 조건부 Shannon 코드북
    """
    spec: object
    D: float
    eps: float
    gamma: float
    seed: int
    point: object
    zpoints: list
    cloud: CloudSummary
    selector: object
    law: object
    codebooks: object
    mixture: object
    truncation: int
    options: dict = field(default_factory=dict)

    @property
    def F(self):
        return self.point.rate

    @property
    def rate_target(self):
        """R = F_n(D) + log2(F_n(D) + 3.4) + 2 + 1/n + gamma"""
        return achievability_bound(self.F, self.spec.horizon, self.gamma)

    def zpoint_for(self, q):
        """Q = q 일 때 쓰는 실현"""
        return self.selector.point0 if q == 0 else self.selector.point1

    def stage_expected_lengths(self):
        return self.codebooks.stage_expected_lengths(self.law.action_marginal())

    def exact_rate(self):
        """(1/n) sum_t E[l(B_t)] (혼합 법칙 아래 정확한 값)"""
        return float(sum(self.stage_expected_lengths()) / self.spec.horizon)

    def exact_cost(self):
        return average_cost(self.law, self.spec)

    def digest(self):
        """결과 묶음용 요약 (정책/테이블 제외)"""
        return {
            'spec': self.spec.name,
            'horizon': self.spec.horizon,
            'D': self.D,
            'eps': self.eps,
            'gamma': self.gamma,
            'eps_penalty': eps_penalty(self.F, self.eps),
            'eps_admissible': eps_admissible(self.F, self.eps, self.gamma),
            'largest_admissible_eps': largest_admissible_eps(self.F, self.gamma),
            'F_n': self.F,
            'rate_target': self.rate_target,
            'policy': self.point.to_dict(),
            'cloud': self.cloud.to_dict(),
            'selector': self.selector.to_dict(),
            'mixture_entropy': self.mixture.to_dict(),
            'truncation': self.truncation,
            'codebooks': self.codebooks.to_dict(),
            'seeds': {
                'seed': self.seed,
                'streams': dict(SIMULATION_CONFIG["seed_streams"])
            }
        }


def build_cloud(spec, point, size, M, seed, start=0):
    """
    N 개의 SFRL 실현 z_[n] 를 뽑아 각각의 (r, d) 계산

    k 번째 실현의 t 단계 테이블은 (seed, 'tables', k, t) 스트림에서 나온다.
    start 부터 번호를 매기므로 점군을 나누어 늘려도 같은 실현이 나온다.
    도달 가능한 이력에서 절단 실패가 난 실현은 세고 제외한다.

    Returns:
        tuple: (ZPoint 목록, 실패 개수)
    """
    law = point.law
    zpoints, failures = [], 0
    for k in range(start, start + size):
        stages = [build_stage(t, law, point.policy, M, seed_stream(seed, "tables", k, t))
                  for t in range(1, spec.horizon + 1)]
        try:
            policy = induced_policy(stages)
        except SfrlTruncationError:
            failures += 1
            continue
        zpoints.append(evaluate_zpoint(spec, policy, z_id=k, stages=stages))
    return zpoints, failures


def _summarize(zpoints, failures):
    coords = np.array([z.coords for z in zpoints], dtype=float)
    size = len(zpoints)
    se = coords.std(axis=0, ddof=1) / np.sqrt(size) if size > 1 else np.zeros(2)
    return CloudSummary(size, failures, float(coords[:, 0].mean()), float(coords[:, 1].mean()),
                        float(se[0]), float(se[1]))


def synthesize(spec, D, eps=None, gamma=None, seed=None, opts=None, cloud_size=None, M=None):
    """
    비용 D 의 부호화-제어 방식 합성

    Args:
        spec (SystemSpec): 시스템 명세
        D (float): 비용 한도
        eps (float): 시분할 율 여유
        gamma (float): 상한 여유
        seed (int): tables 스트림 시드
        opts (SolverOptions): F_n(D) 솔버 옵션
        cloud_size (int): 점군 크기 N
        M (int): 문맥당 제안 개수

    Returns:
        SchemeBundle: 혼합 법칙의 정확한 비용이 D 이하인 방식

    Raises:
        InfeasibleCostError: D 가 최소 비용 미만
        SfrlTruncationError: 절단 실패 비율이 허용치 초과
        BarycenterInfeasibleError: 비용이 D 이하인 점군 원소가 없음
        VerificationError: 혼합 법칙의 비용이 D 초과
    """
    eps = SIMULATION_CONFIG["eps"] if eps is None else float(eps)
    gamma = SIMULATION_CONFIG["gamma"] if gamma is None else float(gamma)
    seed = SIMULATION_CONFIG["seed"] if seed is None else int(seed)
    cloud_size = TIMESHARE_CONFIG["cloud_size"] if cloud_size is None else int(cloud_size)
    M = SFRL_CONFIG["truncation"] if M is None else int(M)
    opts = opts or SolverOptions()

    point = solve_fn(spec, D, opts)
    F = point.rate
    if eps_admissible(F, eps, gamma):
        logger.info(f"eps={eps:g}, gamma={gamma:g}: 율 여유 조건 만족 (벌점 {eps_penalty(F, eps):.6f})")
    else:
        logger.warning(f"eps={eps:g} 의 벌점 {eps_penalty(F, eps):.6f} 이 gamma={gamma:g} 초과; "
                       f"허용 최대 eps={largest_admissible_eps(F, gamma):.6g}")
    logger.info(f"시드: seed={seed}, streams={SIMULATION_CONFIG['seed_streams']}")

    zpoints, failures = build_cloud(spec, point, cloud_size, M, seed)
    drawn = cloud_size
    if not zpoints:
        raise SfrlTruncationError(f"all {cloud_size} cloud draws failed (M={M})")
    cloud = _summarize(zpoints, failures)
    limit = cloud_size * TIMESHARE_CONFIG["max_cloud_growth"]
    while cloud.d_bar > D + TIMESHARE_CONFIG["se_multiplier"] * cloud.d_se and drawn < limit:
        logger.info(f"d_bar={cloud.d_bar:.6f}+-{cloud.d_se:.6f} > D={D:g}; 점군을 {drawn + cloud_size} 개로 확장")
        extra, extra_failures = build_cloud(spec, point, cloud_size, M, seed, start=drawn)
        zpoints += extra
        failures += extra_failures
        drawn += cloud_size
        cloud = _summarize(zpoints, failures)
    if failures:
        logger.warning(f"절단 실패 {failures}/{drawn} (M={M})")
    if cloud.failure_fraction > SFRL_CONFIG["max_failure_fraction"]:
        raise SfrlTruncationError(
            f"truncation failure fraction {cloud.failure_fraction:.3f} exceeds "
            f"{SFRL_CONFIG['max_failure_fraction']} (M={M})")
    information = directed_information(point.law) / spec.horizon
    logger.info(f"점군 N={cloud.size}: r_bar={cloud.r_bar:.6f}+-{cloud.r_se:.6f} "
                f"(SFRL 한계 {float(sfrl_bound(information)):.6f}), d_bar={cloud.d_bar:.6f}+-{cloud.d_se:.6f}")

    # 남은 표본 초과분은 율 여유로 흡수하고 혼합 법칙의 정확한 비용으로 판정한다
    tolerance = max(TIMESHARE_CONFIG["se_multiplier"] * cloud.d_se, cloud.d_bar - D)
    selector = caratheodory_reduce(zpoints, D=D, eps=eps, tolerance=tolerance)
    if selector.eps_used > eps + TIMESHARE_CONFIG["tie_tolerance"]:
        logger.warning(f"d_bar={cloud.d_bar:.6f} > D: 율 여유 {selector.eps_used:.6f} 사용 (eps={eps:g})")
    law = mixture_law(selector, spec)
    entropy = mixture_entropy(selector, spec)
    codebooks = build_codebooks(law)

    bundle = SchemeBundle(spec, float(D), eps, gamma, seed, point, zpoints, cloud, selector, law,
                          codebooks, entropy, M, {'restarts': opts.restarts, 'step_size': opts.step_size})
    cost = bundle.exact_cost()
    if cost > D + SIMULATION_CONFIG["cost_tolerance"]:
        raise VerificationError(f"mixture cost {cost:.9g} exceeds D={D:.9g}")
    logger.success(f"방식 합성 완료: lambda={selector.lam:.6f}, 정확한 율 {bundle.exact_rate():.6f} bits, "
                   f"비용 {cost:.6f} <= {D:g}")
    return bundle

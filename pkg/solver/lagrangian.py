"""
라그랑주 완화 문제 min (1/n) I(X->U) + mu (1/n) sum E[c] 풀이

행 단위 엔트로피 거울 하강(지수 경사)으로 정책을 갱신한다. 한 번의 반복은
행동 주변 분포 r = P_U 를 고정한 후방 soft-Bellman 패스와 정확한 전방 평가로
이루어지며, 단위 스텝에서는 다단계 Blahut-Arimoto 갱신과 같다.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import entr, rel_entr, softmax

from config import MODEL_CONFIG, SOLVER_CONFIG
from system.exceptions import SolverConvergenceError, SpecValidationError
from system.information import LN2
from system.joint_law import (
    JointLaw, average_cost, directed_information, evaluate_joint, forward_product
)
from system.kernels import history_shape
from system.policy import CausalPolicy
from utils import logger

# 쌍대 하한을 믿을 수 있는 행동열 주변 확률의 최소값
SUPPORT_FLOOR = 1e-200


@dataclass
class SolverOptions:
    """F_n(D) 솔버 옵션 (기본값은 SOLVER_CONFIG)"""
    step_size: float = SOLVER_CONFIG["step_size"]
    max_iterations: int = SOLVER_CONFIG["max_iterations"]
    tolerance: float = SOLVER_CONFIG["tolerance"]
    gap_tolerance: float = SOLVER_CONFIG["gap_tolerance"]
    restarts: int = SOLVER_CONFIG["restarts"]
    restart_seed: int = SOLVER_CONFIG["restart_seed"]
    workers: int = SOLVER_CONFIG["workers"]
    mu_exponents: tuple = SOLVER_CONFIG["mu_exponents"]
    max_mu_exponent: int = SOLVER_CONFIG["max_mu_exponent"]
    cost_tolerance: float = SOLVER_CONFIG["cost_tolerance"]
    max_bisections: int = SOLVER_CONFIG["max_bisections"]
    budget: int = MODEL_CONFIG["trajectory_budget"]
    strict: bool = False
    extra_mus: list = field(default_factory=list)

    def quick(self, **overrides):
        """일부 값만 바꾼 사본"""
        return replace(self, **overrides)


@dataclass
class RateCostPoint:
    """
    율-비용 점 (rate 비트/단계, cost 비용/단계)

    rate 와 cost 는 policy 가 유도하는 결합 법칙에서 정확히 계산된 값이다.
    """
    rate: float
    cost: float
    mu: float
    policy: CausalPolicy
    law: JointLaw = None
    converged: bool = True
    iterations: int = 0
    source: str = "lagrangian"

    @property
    def objective(self):
        return self.rate + self.mu * self.cost

    def to_dict(self):
        """JSON 직렬화용 요약 (정책 제외)"""
        return {
            'rate': self.rate,
            'cost': self.cost,
            'mu': self.mu,
            'converged': self.converged,
            'iterations': self.iterations,
            'source': self.source
        }


def exact_point(spec, policy, mu=0.0, source="exact", budget=None):
    """정책의 정확한 (rate, cost) 점"""
    law = evaluate_joint(spec, policy, budget)
    rate = directed_information(law) / spec.horizon
    return RateCostPoint(rate, average_cost(law, spec), mu, policy, law, source=source)


def _kernel_arrays(spec):
    return [spec.kernel_stage(t) for t in range(1, spec.horizon + 1)]


def _terminal_values(law):
    """-log2 P_U(u_[n]) 를 전체 이력 형태로 브로드캐스트 가능한 배열"""
    marginal = np.maximum(law.action_marginal(), np.finfo(float).tiny)
    shape = tuple(1 if axis % 2 == 0 else law.n_actions for axis in range(2 * law.horizon))
    return -np.log2(marginal).reshape(shape)


def _mirror_step(policy, values, step):
    """log pi_new = (1-step) log pi - step * V (행 정규화)"""
    logits = -step * LN2 * values
    if step < 1.0:
        with np.errstate(divide="ignore"):
            logits = logits + (1.0 - step) * np.log(policy)
    with np.errstate(invalid="ignore"):
        updated = softmax(logits, axis=-1)
    broken = ~np.all(np.isfinite(updated), axis=-1, keepdims=True)
    return np.where(broken, policy, updated)


def backward_pass(kernels, stages, cost, terminal, mu, step=None):
    """
    후방 soft-Bellman 패스

    Q_t(h, u) = mu c(x_t, u) + E[ sum_u' pi_{t+1}(u') (log2 pi_{t+1}(u') + Q_{t+1}) ] 이고
    Q_n 에는 종단값 -log2 r(u_[n]) 이 더해진다.

    Args:
        kernels (list): 단계별 커널 배열
        stages (list): 현재 정책 단계 배열
        cost (np.ndarray): (|X|,|U|) 비용
        terminal (np.ndarray): 종단값 배열
        mu (float): 라그랑주 승수
        step (float): None 이면 갱신 없이 Q 만 계산

    Returns:
        tuple: (갱신된 단계 목록, 단계별 Q 목록)
    """
    n = len(stages)
    n_states, n_actions = cost.shape
    updated = list(stages)
    values = [None] * n
    carry = None
    for t in range(n, 0, -1):
        future = terminal if t == n else (kernels[t] * carry).sum(axis=-1)
        q = np.array(np.broadcast_to(mu * cost + future, history_shape(2 * t, n_states, n_actions)))
        values[t - 1] = q
        if step is not None:
            updated[t - 1] = _mirror_step(stages[t - 1], q, step)
        policy = updated[t - 1]
        carry = (policy * q).sum(axis=-1) - entr(policy).sum(axis=-1) / LN2
    return updated, values


def _objective(spec, law, mu):
    n = spec.horizon
    return directed_information(law) / n + mu * average_cost(law, spec)


def duality_gap(before, after, n):
    """
    단위 스텝 갱신 한 번의 쌍대 간격 (비트/단계)

    r = P_U(before) 를 고정한 최적 응답의 값을 G(r) 라 하면 모든 정책에 대해
    n * 목적함수 >= G(r) - log2 max_u P_U(after)(u) / r(u) 이므로,
    after 의 목적함수에서 이 하한을 뺀 값은 (log2 max 비 - KL(P_U(after) || r)) / n 이다.

    Args:
        before (JointLaw): 갱신 전 결합 법칙
        after (JointLaw): 단위 스텝 갱신 후 결합 법칙
        n (int): 구간 길이

    Returns:
        float: 간격 (r 의 최소 원소가 너무 작아 비가 부정확하면 inf)
    """
    r = before.action_marginal().ravel()
    if r.min() < SUPPORT_FLOOR:
        return float("inf")
    p = after.action_marginal().ravel()
    worst = float(np.log2(np.max(p / r)))
    kl = float(rel_entr(p, r).sum()) / LN2
    return max(worst - kl, 0.0) / n


def _descend(spec, mu, start, opts, kernels):
    """
    한 초기 정책에서 수렴할 때까지 반복

    목적함수 변화가 tolerance * max(1, |목적함수|) 이하이거나, 단위 스텝에서
    쌍대 간격이 gap_tolerance 이하이면 수렴으로 본다.

    Returns:
        tuple: (정책, 목적함수, 수렴 여부, 반복 수, 전역 최적값 하한)
    """
    policy = start
    law = JointLaw(forward_product(kernels, policy.stages), spec.horizon, spec.n_states, spec.n_actions,
                   validate=False)
    objective = _objective(spec, law, mu)
    lower = -np.inf
    converged = False
    iteration = 0
    for iteration in range(1, opts.max_iterations + 1):
        stages, _ = backward_pass(kernels, policy.stages, spec.cost, _terminal_values(law), mu, opts.step_size)
        policy = CausalPolicy(stages, spec.n_states, spec.n_actions, validate=False)
        updated = JointLaw(forward_product(kernels, stages), spec.horizon, spec.n_states, spec.n_actions,
                           validate=False)
        previous, objective = objective, _objective(spec, updated, mu)
        if opts.step_size == 1.0:
            gap = duality_gap(law, updated, spec.horizon)
            lower = max(lower, objective - gap)
            if gap <= opts.gap_tolerance:
                converged = True
        law = updated
        if converged or abs(previous - objective) <= opts.tolerance * max(1.0, abs(objective)):
            converged = True
            break
    return policy, objective, converged, iteration, lower


def _starts(spec, opts):
    """균등 정책 + Dirichlet 재시작 (고정 순서)"""
    starts = [CausalPolicy.uniform(spec.horizon, spec.n_states, spec.n_actions)]
    for k in range(opts.restarts):
        rng = np.random.default_rng(np.random.SeedSequence(opts.restart_seed, spawn_key=(k,)))
        starts.append(CausalPolicy.random(spec.horizon, spec.n_states, spec.n_actions, rng))
    return starts


def solve_lagrangian(spec, mu, opts=None, starts=None, extra_starts=()):
    """
    고정된 mu 에서 라그랑주 목적함수를 최소화하는 정책 계산

    Args:
        spec (SystemSpec): 시스템 명세
        mu (float): 비용 승수 (>= 0)
        opts (SolverOptions): 솔버 옵션
        starts (list): 초기 정책 목록 (None 이면 균등 + 재시작)
        extra_starts (tuple): 기본 초기 정책 뒤에 덧붙일 정책 (예: 율 0 개루프 정책)

    Returns:
        RateCostPoint: 정확히 평가된 (rate, cost) 와 정책.
            어느 실행의 쌍대 하한이 최선 목적함수와 gap_tolerance 이내이면 수렴으로 표시

    Raises:
        SpecValidationError: mu < 0
        BudgetExceededError: 궤적 예산 초과
        SolverConvergenceError: opts.strict 이고 수렴 실패
    """
    opts = opts or SolverOptions()
    if not mu >= 0:
        raise SpecValidationError(f"multiplier must be nonnegative, got {mu}", key="mu")
    spec.check_budget(opts.budget)
    kernels = _kernel_arrays(spec)
    starts = list(starts if starts is not None else _starts(spec, opts)) + list(extra_starts)

    def run(start):
        return _descend(spec, mu, start, opts, kernels)

    if opts.workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=opts.workers) as executor:
            results = list(executor.map(run, starts))
    else:
        results = [run(start) for start in starts]

    # 재시작 순서대로 비교하여 동률이면 앞선 결과 유지
    best = min(range(len(results)), key=lambda i: (results[i][1], i))
    policy, objective, converged, iterations, _ = results[best]
    lower = max(result[4] for result in results)
    if not converged and objective - lower <= opts.gap_tolerance:
        logger.debug(f"mu={mu:.6g}: 다른 실행의 하한으로 인증 (간격 {objective - lower:.3g})")
        converged = True
    if not converged:
        message = (f"mu={mu:.6g}: no convergence after {iterations} iterations "
                   f"(objective {objective:.9g}, lower bound {lower:.9g})")
        if opts.strict:
            raise SolverConvergenceError(message, mu=mu, iterations=iterations)
        logger.warning(message)

    point = exact_point(spec, CausalPolicy(policy.stages, spec.n_states, spec.n_actions), mu,
                        budget=opts.budget)
    point.converged = converged
    point.iterations = iterations
    point.source = "lagrangian"
    logger.debug(f"mu={mu:.6g}: rate={point.rate:.6f}, cost={point.cost:.6f}, iterations={iterations}")
    return point


def lagrangian_gradient(spec, policy, mu):
    """
    목적함수 (1/n)I + mu (1/n) sum E[c] 의 정책 기울기

    g_t(h, u) = P(h) (log2 pi_t(u|h) + Q_t(h, u)) / n (행 방향 상수항 제외)
    """
    kernels = _kernel_arrays(spec)
    law = evaluate_joint(spec, policy)
    _, values = backward_pass(kernels, policy.stages, spec.cost, _terminal_values(law), mu)
    gradients = []
    for t, (stage, q) in enumerate(zip(policy.stages, values), 1):
        reach = law.prefix_marginal(2 * t - 1)[..., None]
        with np.errstate(divide="ignore"):
            log_policy = np.where(stage > 0, np.log2(np.where(stage > 0, stage, 1.0)), 0.0)
        gradients.append(reach * (log_policy + q) / spec.horizon)
    return gradients


def check_gradient(spec, policy, mu, rng=None, step=1e-6, rtol=1e-4):
    """
    해석적 기울기와 중앙 차분의 방향 미분 비교

    방향은 행 합이 0 인 난수 방향이며, 정책은 내부점(모든 원소 > 0)이어야 한다.

    Returns:
        dict: analytic, numeric, relative_error, passed
    """
    rng = rng or np.random.default_rng(0)
    gradients = lagrangian_gradient(spec, policy, mu)
    directions = []
    for stage in policy.stages:
        noise = rng.standard_normal(stage.shape)
        # pi 가중 중심화: 행 합 0, 원소 크기에 비례
        directions.append(stage * (noise - (stage * noise).sum(axis=-1, keepdims=True)))
    analytic = float(sum((g * d).sum() for g, d in zip(gradients, directions)))

    def shifted(sign):
        stages = [stage + sign * step * d for stage, d in zip(policy.stages, directions)]
        stages = [s / s.sum(axis=-1, keepdims=True) for s in stages]
        law = evaluate_joint(spec, CausalPolicy(stages, spec.n_states, spec.n_actions))
        return _objective(spec, law, mu)

    numeric = (shifted(1.0) - shifted(-1.0)) / (2.0 * step)
    scale = max(abs(analytic), abs(numeric), 1e-12)
    relative_error = abs(analytic - numeric) / scale
    return {
        'analytic': analytic,
        'numeric': numeric,
        'relative_error': relative_error,
        'passed': relative_error <= rtol
    }

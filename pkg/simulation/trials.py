"""
폐루프 몬테카를로 시행

시행마다 Q 를 뽑고, 상태를 커널에서 표본 추출하고, SFRL 테이블로 행동을 고른 뒤
부호화/복호하여 적용한다. 시행 i 의 난수는 (seed, 'dynamics', i) 와 (seed, 'q', i)
스트림에서만 나오므로 실행 순서와 무관하게 결과가 같다.
"""

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from config import SIMULATION_CONFIG
from sfrl import select
from system.exceptions import DecodeMismatchError, SpecValidationError
from system.joint_law import conditional_action_entropies, directed_information
from system.policy import interleave
from utils import logger, seed_stream, write_atomic


@dataclass
class SimulationReport:
    """
    시행 결과와 정확한 기준값

    empirical_* 는 시행 평균과 표준오차이며 trials = 0 이면 None 이다.
    """
    trials: int
    seed: int
    exact_rate: float
    exact_cost: float
    F: float
    bound: float
    D: float
    horizon: int
    stage_lengths: list
    stage_entropies: list
    action_entropy: float
    directed_information: float
    mixture_conditional_entropy: float
    kraft_ok: bool
    failure_fraction: float
    empirical_rate: float = None
    rate_se: float = None
    empirical_cost: float = None
    cost_se: float = None
    q_counts: tuple = (0, 0)
    mismatches: int = 0
    rows: list = field(default_factory=list, repr=False)

    def to_dict(self):
        return {
            'trials': self.trials,
            'seed': self.seed,
            'exact_rate': self.exact_rate,
            'exact_cost': self.exact_cost,
            'F_n': self.F,
            'bound': self.bound,
            'D': self.D,
            'horizon': self.horizon,
            'stage_lengths': list(self.stage_lengths),
            'stage_entropies': list(self.stage_entropies),
            'action_entropy': self.action_entropy,
            'directed_information': self.directed_information,
            'mixture_conditional_entropy': self.mixture_conditional_entropy,
            'kraft_ok': self.kraft_ok,
            'failure_fraction': self.failure_fraction,
            'empirical_rate': self.empirical_rate,
            'rate_se': self.rate_se,
            'empirical_cost': self.empirical_cost,
            'cost_se': self.cost_se,
            'q_counts': list(self.q_counts),
            'mismatches': self.mismatches
        }

    def write_csv(self, path):
        """시행별 (trial, bits, cost, q) CSV 저장"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["trial", "bits", "cost", "q"])
        for trial, bits, cost, q in self.rows:
            writer.writerow([trial, bits, repr(float(cost)), q])
        return write_atomic(path, buffer.getvalue())


def _sample(row, rng):
    """확률 벡터에서 인덱스 하나 추출"""
    cumulative = np.cumsum(row)
    index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    return min(index, row.size - 1)


def run_trial(bundle, index, seed, kernels=None):
    """
    한 번의 폐루프 시행

    Returns:
        tuple: (부호 비트 수, 총 비용, q)

    Raises:
        DecodeMismatchError: 복호된 행동이 선택된 행동과 다름
    """
    spec = bundle.spec
    kernels = kernels or [spec.kernel_stage(t) for t in range(1, spec.horizon + 1)]
    q_rng = seed_stream(seed, "q", index)
    q = 0 if q_rng.random() < bundle.selector.lam else 1
    stages = bundle.zpoint_for(q).stages
    rng = seed_stream(seed, "dynamics", index)

    x_hist, u_hist = [], []
    stream = ""
    offset = 0
    cost = 0.0
    for t in range(1, spec.horizon + 1):
        x = _sample(kernels[t - 1][interleave(x_hist, u_hist)], rng)
        x_hist.append(x)
        u = select(stages[t - 1], x_hist, u_hist)
        stream += bundle.codebooks.encode(t, u_hist, u)
        decoded, consumed = bundle.codebooks.decode(t, u_hist, stream, offset)
        if decoded != u:
            raise DecodeMismatchError(f"trial {index}: decoded action {decoded} differs from selected {u}", stage=t)
        offset += consumed
        u_hist.append(u)
        cost += float(spec.cost[x, u])
    if offset != len(stream):
        raise DecodeMismatchError(f"trial {index}: {len(stream) - offset} undecoded bits")
    return len(stream), cost, q


def _mean_se(values):
    values = np.asarray(values, dtype=float)
    error = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0
    return float(values.mean()), error


def run_trials(bundle, trials=None, seed=None, workers=1):
    """
    방식 묶음의 폐루프 시행과 정확한 기준값 보고

    Args:
        bundle (SchemeBundle): synthesize 결과
        trials (int): 시행 횟수 (0 이면 정확한 값만)
        seed (int): dynamics / q 스트림 시드 (None 이면 묶음의 시드)
        workers (int): 병렬 스레드 수

    Returns:
        SimulationReport: 경험적 율/비용과 정확한 율/비용
    """
    trials = SIMULATION_CONFIG["trials"] if trials is None else int(trials)
    if trials < 0:
        raise SpecValidationError(f"trial count must be nonnegative, got {trials}", key="trials")
    seed = bundle.seed if seed is None else int(seed)
    spec = bundle.spec
    n = spec.horizon
    kernels = [spec.kernel_stage(t) for t in range(1, n + 1)]

    def run(index):
        return run_trial(bundle, index, seed, kernels)

    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(run, range(trials)))
    else:
        outcomes = [run(index) for index in range(trials)]

    report = SimulationReport(
        trials=trials,
        seed=seed,
        exact_rate=bundle.exact_rate(),
        exact_cost=bundle.exact_cost(),
        F=bundle.F,
        bound=bundle.rate_target,
        D=bundle.D,
        horizon=n,
        stage_lengths=bundle.stage_expected_lengths(),
        stage_entropies=conditional_action_entropies(bundle.law),
        action_entropy=bundle.law.action_entropy() / n,
        directed_information=directed_information(bundle.law) / n,
        mixture_conditional_entropy=bundle.mixture.conditional / n,
        kraft_ok=bundle.codebooks.kraft_ok(),
        failure_fraction=bundle.cloud.failure_fraction,
    )
    if outcomes:
        bits = [b / n for b, _, _ in outcomes]
        costs = [c / n for _, c, _ in outcomes]
        report.empirical_rate, report.rate_se = _mean_se(bits)
        report.empirical_cost, report.cost_se = _mean_se(costs)
        ones = sum(q for _, _, q in outcomes)
        report.q_counts = (trials - ones, ones)
        report.rows = [(i, b, c, q) for i, (b, c, q) in enumerate(outcomes)]
        logger.info(f"{trials}회 시행: 율 {report.empirical_rate:.6f}+-{report.rate_se:.6f} "
                    f"(정확 {report.exact_rate:.6f}), 비용 {report.empirical_cost:.6f}+-{report.cost_se:.6f} "
                    f"(정확 {report.exact_cost:.6f})")
    return report

"""
샌드위치 한계 검증 원장(ledger)

정확한 값으로 두 부등식을 검사하고, 역방향 사슬
rate >= H(U_[n])/n >= I(X->U)/n >= F_n(D) 의 중간값을 모두 기록한다.
실패는 예외가 아니라 원장 항목으로 남는다.
"""

from dataclasses import dataclass, field

from config import SFRL_CONFIG, SIMULATION_CONFIG
from utils import logger

ROUNDING = 1e-12


@dataclass
class LedgerEntry:
    """한 부등식 lhs <= rhs 의 검사 결과"""
    name: str
    lhs: float
    rhs: float
    passed: bool
    kind: str = "check"

    @property
    def margin(self):
        return self.rhs - self.lhs

    def to_dict(self):
        return {
            'name': self.name,
            'lhs': self.lhs,
            'rhs': self.rhs,
            'margin': self.margin,
            'passed': self.passed,
            'kind': self.kind
        }


@dataclass
class SandwichLedger:
    entries: list = field(default_factory=list)

    def add(self, name, lhs, rhs, tolerance=0.0, kind="check"):
        lhs, rhs = float(lhs), float(rhs)
        entry = LedgerEntry(name, lhs, rhs, lhs <= rhs + tolerance, kind)
        self.entries.append(entry)
        return entry

    @property
    def passed(self):
        return all(entry.passed for entry in self.entries if entry.kind == "check")

    def entry(self, name):
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def failures(self):
        return [entry.name for entry in self.entries if entry.kind == "check" and not entry.passed]

    def to_dict(self):
        return {
            'passed': self.passed,
            'failures': self.failures(),
            'entries': [entry.to_dict() for entry in self.entries]
        }


def verify_sandwich(report, converse_tolerance=None, se_multiplier=None):
    """
    SimulationReport 에 대한 샌드위치 검증

    Args:
        report (SimulationReport): run_trials 결과
        converse_tolerance (float): I/n >= F_n(D) 비교 허용치 (솔버 오차)
        se_multiplier (float): 경험값-정확값 비교의 표준오차 배수

    Returns:
        SandwichLedger: 항목별 결과와 전체 통과 여부
    """
    converse_tolerance = SIMULATION_CONFIG["converse_tolerance"] if converse_tolerance is None else converse_tolerance
    se_multiplier = SIMULATION_CONFIG["report_se_multiplier"] if se_multiplier is None else se_multiplier
    n = report.horizon
    ledger = SandwichLedger()

    # 상한
    ledger.add("achievability", report.exact_rate, report.bound, ROUNDING)
    ledger.add("cost", report.exact_cost, report.D, SIMULATION_CONFIG["cost_tolerance"])

    # 역방향 사슬
    ledger.add("converse.rate_vs_entropy", report.action_entropy, report.exact_rate, ROUNDING)
    ledger.add("converse.entropy_vs_information", report.directed_information, report.action_entropy, ROUNDING)
    ledger.add("converse.information_vs_F", report.F, report.directed_information, converse_tolerance)
    ledger.add("converse", report.F, report.exact_rate, converse_tolerance)

    # 부호와 시분할
    for t, (length, entropy) in enumerate(zip(report.stage_lengths, report.stage_entropies), 1):
        ledger.add(f"coding.stage{t}", length, entropy + 1.0, ROUNDING)
    ledger.add("coding.kraft", 0.0 if report.kraft_ok else 1.0, 0.0)
    ledger.add("timeshare.entropy", report.action_entropy, report.mixture_conditional_entropy + 1.0 / n, ROUNDING)
    ledger.add("sfrl.truncation", report.failure_fraction, SFRL_CONFIG["max_failure_fraction"])

    if report.trials > 0:
        ledger.add("empirical.mismatches", report.mismatches, 0)
        ledger.add("empirical.cost", abs(report.empirical_cost - report.exact_cost),
                   se_multiplier * report.cost_se, ROUNDING)
        ledger.add("empirical.rate", abs(report.empirical_rate - report.exact_rate),
                   se_multiplier * report.rate_se, ROUNDING)
        ledger.add("empirical.rate_bound", report.empirical_rate, report.bound, ROUNDING, kind="info")

    for entry in ledger.entries:
        if not entry.passed:
            logger.warning(f"검증 실패: {entry.name} ({entry.lhs:.9g} > {entry.rhs:.9g})")
    if ledger.passed:
        logger.success(f"샌드위치 검증 통과 ({len(ledger.entries)}개 항목)")
    else:
        logger.error(f"샌드위치 검증 실패: {', '.join(ledger.failures())}")
    return ledger

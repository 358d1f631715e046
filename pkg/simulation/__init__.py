"""
부호화-제어 방식 합성과 폐루프 시뮬레이션 모듈

주요 기능:
- synthesize: F_n(D) 정책 -> SFRL 점군 -> 시분할 -> 코드북
- run_trials: Q 추출, 상태 표본, 행동 선택, 부호화/복호 시행
- verify_sandwich: 정확한 값으로 상한/하한 원장 작성
- bounds: 상한 산술, eps 조건, 차원별 오버헤드

사용 예시:
    from simulation import synthesize, run_trials, verify_sandwich

    bundle = synthesize(spec, D=0.3, eps=0.05, gamma=0.25, seed=7)
    report = run_trials(bundle, trials=1000)
    print(verify_sandwich(report).passed)
"""

from .bounds import (
    achievability_bound, eps_admissible, eps_penalty, first_order_ratio, gap_shrinkage_table,
    largest_admissible_eps, logarithmic_gap, per_coordinate_overhead
)
from .scheme import CloudSummary, SchemeBundle, build_cloud, synthesize
from .trials import SimulationReport, run_trial, run_trials
from .verification import LedgerEntry, SandwichLedger, verify_sandwich

__all__ = [
    'achievability_bound',
    'eps_admissible',
    'eps_penalty',
    'first_order_ratio',
    'gap_shrinkage_table',
    'largest_admissible_eps',
    'logarithmic_gap',
    'per_coordinate_overhead',
    'CloudSummary',
    'SchemeBundle',
    'build_cloud',
    'synthesize',
    'SimulationReport',
    'run_trial',
    'run_trials',
    'LedgerEntry',
    'SandwichLedger',
    'verify_sandwich'
]

"""
조건부 강함수 표현(SFRL) 엔진

각 단계 t 에서 (X_[t], U_[t-1]) 과 독립인 Z_t (문맥별 절단 Poisson 제안 테이블) 와
결정적 함수 g_t 로 U_t = g_t(X_[t], U_[t-1], Z_t) 를 실현합니다.

주요 기능:
- ProposalTable: 제안 행동과 도착 시각
- build_stage / select: 단계 테이블 생성과 행동 선택
- induced_policy: 고정 테이블이 유도하는 결정적 정책
- stage_entropy_given_z, estimate_stage_entropies, pushforward_tv: 한계와 충실도 검사
"""

from .proposal import ProposalTable
from .stage import (
    SfrlStage,
    build_stage,
    select,
    induced_actions,
    induced_policy,
    pushforward,
    stage_entropy_given_z
)
from .entropy import StageEntropyEstimate, sfrl_bound, estimate_stage_entropies, pushforward_tv

__all__ = [
    'ProposalTable',
    'SfrlStage',
    'build_stage',
    'select',
    'induced_actions',
    'induced_policy',
    'pushforward',
    'stage_entropy_given_z',
    'StageEntropyEstimate',
    'sfrl_bound',
    'estimate_stage_entropies',
    'pushforward_tv'
]

"""
유한 알파벳 제어 시스템 모델 모듈

이 모듈은 유한 상태/행동 알파벳을 갖는 확률 제어 시스템과 인과 정책을 표현하고,
둘이 유도하는 궤적 결합 법칙 위에서 비용, 엔트로피, 방향성 정보량을
정확하게 계산합니다.

주요 클래스:
- SystemSpec: 시스템 명세 (지평, 알파벳, 커널, 비용)
- KernelFactory: 'markov' / 'full-history' 커널 생성
- CausalPolicy: 단계별 조건부 행동 분포
- JointLaw: 궤적 확률 테이블

사용 예시:
    from system import SystemSpec, CausalPolicy, evaluate_joint, directed_information

    spec = SystemSpec.markov(2, [0.7, 0.3], transition, cost)
    law = evaluate_joint(spec, CausalPolicy.uniform(2, 2, 2))
    rate = directed_information(law) / spec.horizon
"""

from .exceptions import (
    RateCostError,
    SpecValidationError,
    SpecFormatError,
    BudgetExceededError,
    InstanceTooLargeError,
    InfeasibleCostError,
    SolverConvergenceError,
    SfrlContextError,
    SfrlTruncationError,
    BarycenterInfeasibleError,
    CodebookError,
    UnknownSymbolError,
    MalformedPrefixError,
    DecodeMismatchError,
    LqgDomainError,
    VerificationError
)
from .kernels import BaseKernel, MarkovKernel, FullHistoryKernel, KernelFactory, history_shape
from .spec import SystemSpec
from .policy import CausalPolicy, interleave
from .joint_law import (
    JointLaw,
    evaluate_joint,
    average_cost,
    stage_costs,
    directed_information,
    stage_informations,
    conditional_action_entropies
)
from .spec_loader import load_spec, spec_from_document, spec_to_document

__all__ = [
    'RateCostError',
    'SpecValidationError',
    'SpecFormatError',
    'BudgetExceededError',
    'InstanceTooLargeError',
    'InfeasibleCostError',
    'SolverConvergenceError',
    'SfrlContextError',
    'SfrlTruncationError',
    'BarycenterInfeasibleError',
    'CodebookError',
    'UnknownSymbolError',
    'MalformedPrefixError',
    'DecodeMismatchError',
    'LqgDomainError',
    'VerificationError',
    'BaseKernel',
    'MarkovKernel',
    'FullHistoryKernel',
    'KernelFactory',
    'history_shape',
    'SystemSpec',
    'CausalPolicy',
    'interleave',
    'JointLaw',
    'evaluate_joint',
    'average_cost',
    'stage_costs',
    'directed_information',
    'stage_informations',
    'conditional_action_entropies',
    'load_spec',
    'spec_from_document',
    'spec_to_document'
]

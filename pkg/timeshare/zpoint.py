"""
보조 난수 실현 z_[n] 하나의 (r, d) 좌표
"""

from dataclasses import dataclass

from system.exceptions import SpecValidationError
from system.joint_law import average_cost, evaluate_joint


@dataclass
class ZPoint:
    """
    z_[n] 실현의 율/비용 좌표

    r = (1/n) H(U_[n] | Z_[n] = z), d = (1/n) sum E[c | Z_[n] = z]
    둘 다 z 가 유도하는 결정적 정책 아래 정확한 궤적 열거로 계산된다.
    """
    z_id: int
    r: float
    d: float
    policy: object = None
    law: object = None
    stages: list = None

    @property
    def coords(self):
        return (self.r, self.d)

    def to_dict(self):
        return {'z_id': self.z_id, 'r': self.r, 'd': self.d}


def evaluate_zpoint(spec, policy, z_id=0, stages=None, budget=None):
    """
    결정적 정책의 (r, d) 계산

    Args:
        spec (SystemSpec): 시스템 명세
        policy (CausalPolicy): z 가 유도한 결정적 정책
        z_id (int): 실현 식별자
        stages (list): 정책을 만든 SfrlStage 목록 (시뮬레이션에서 재사용)

    Raises:
        SpecValidationError: 정책이 결정적이지 않음
        BudgetExceededError: 궤적 예산 초과
    """
    if not policy.is_deterministic():
        raise SpecValidationError("z-point policies must be deterministic", key="policy")
    law = evaluate_joint(spec, policy, budget)
    r = max(law.action_entropy(), 0.0) / spec.horizon
    return ZPoint(z_id, r, average_cost(law, spec), policy, law, stages)

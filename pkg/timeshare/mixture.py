"""
시분할 혼합 법칙과 엔트로피
"""

from dataclasses import dataclass

from system.information import binary_entropy
from system.joint_law import evaluate_joint


@dataclass
class MixtureEntropy:
    """H(U_[n]|Q), H(U_[n]), h(lambda) 와 H(U_[n]) <= H(U_[n]|Q) + 1 검사 결과"""
    conditional: float
    unconditional: float
    binary: float
    holds: bool

    def to_dict(self):
        return {
            'conditional': self.conditional,
            'unconditional': self.unconditional,
            'binary': self.binary,
            'holds': self.holds
        }


def _law_of(point, spec):
    return point.law if point.law is not None else evaluate_joint(spec, point.policy)


def mixture_law(selector, spec):
    """lam * P(z0) + (1 - lam) * P(z1) 결합 법칙"""
    law0 = _law_of(selector.point0, spec)
    if selector.lam >= 1.0:
        return law0
    return law0.mix(_law_of(selector.point1, spec), selector.lam)


def mixture_entropy(selector, spec):
    """
    시분할 혼합의 엔트로피 계산

    Args:
        selector (TimeShareSelector): ZPoint 가 붙은 선택기
        spec (SystemSpec): 시스템 명세

    Returns:
        MixtureEntropy: H(U|Q) = lam n r0 + (1-lam) n r1, 혼합 법칙의 H(U_[n]), h(lam)
    """
    n = spec.horizon
    lam = selector.lam
    conditional = lam * n * selector.point0.r + (1.0 - lam) * n * selector.point1.r
    unconditional = mixture_law(selector, spec).action_entropy()
    binary = float(binary_entropy(lam))
    holds = unconditional <= conditional + 1.0 + 1e-12
    return MixtureEntropy(conditional, unconditional, binary, holds)

"""
율-비용 툴킷 커스텀 예외 클래스들
"""

from config import EXIT_CODES


class RateCostError(Exception):
    """툴킷 공통 오류"""
    exit_code = EXIT_CODES["spec_error"]

    def __init__(self, message, stage=None, key=None):
        super().__init__(message)
        self.stage = stage
        self.key = key

    def __str__(self):
        base_msg = super().__str__()
        if self.key:
            return f"[{self.key}] {base_msg}"
        if self.stage is not None:
            return f"[t={self.stage}] {base_msg}"
        return base_msg


class SpecValidationError(RateCostError):
    """시스템/정책 명세 검증 오류 (차원 불일치, 정규화 실패 등)"""
    pass


class SpecFormatError(SpecValidationError):
    """명세 파일 형식 오류 (문제가 된 키 이름을 포함)"""
    pass


class BudgetExceededError(RateCostError):
    """궤적 테이블이 설정된 예산을 초과"""
    def __init__(self, entries, budget):
        super().__init__(f"trajectory table needs {entries} entries, budget is {budget}")
        self.entries = entries
        self.budget = budget


class InstanceTooLargeError(RateCostError):
    """전수 탐색 오라클이 처리할 수 없는 크기"""
    pass


class InfeasibleCostError(RateCostError):
    """요청한 비용 D가 최소 달성 비용보다 작음"""
    exit_code = EXIT_CODES["infeasible"]

    def __init__(self, D, minimal_cost):
        super().__init__(f"cost level D={D:.6g} is infeasible; minimal achievable cost is {minimal_cost:.6g}")
        self.D = D
        self.minimal_cost = minimal_cost


class SolverConvergenceError(RateCostError):
    """최대 반복 횟수 내에 수렴하지 못함"""
    exit_code = EXIT_CODES["non_convergence"]

    def __init__(self, message, mu=None, iterations=None):
        super().__init__(message)
        self.mu = mu
        self.iterations = iterations


class SfrlContextError(RateCostError):
    """제안 테이블이 없는 행동 이력 문맥"""
    pass


class SfrlTruncationError(RateCostError):
    """모든 선택 가중치가 무한대 (절단 실패)"""
    exit_code = EXIT_CODES["verification_failure"]


class BarycenterInfeasibleError(RateCostError):
    """표본 점군의 무게중심 비용이 D를 초과"""
    exit_code = EXIT_CODES["verification_failure"]

    def __init__(self, d_bar, D, reason=None):
        reason = reason or "upstream policy misses the cost constraint"
        super().__init__(f"cloud barycenter cost {d_bar:.9g}, D={D:.9g}: {reason}")
        self.d_bar = d_bar
        self.D = D


class CodebookError(RateCostError):
    """접두 부호 오류"""
    pass


class UnknownSymbolError(CodebookError):
    """문맥에 부호어가 없는 심볼"""
    pass


class MalformedPrefixError(CodebookError):
    """어떤 부호어로도 시작하지 않는 비트열"""
    pass


class DecodeMismatchError(RateCostError):
    """복호된 행동이 선택된 행동과 다름 (치명적)"""
    exit_code = EXIT_CODES["verification_failure"]


class LqgDomainError(RateCostError):
    """스칼라 LQG 정의역 위반"""
    pass


class VerificationError(RateCostError):
    """샌드위치 검증 실패"""
    exit_code = EXIT_CODES["verification_failure"]

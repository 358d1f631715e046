"""
유한 알파벳 제어 시스템 명세
"""

import numpy as np

from config import ERROR_MESSAGES, MODEL_CONFIG
from .exceptions import BudgetExceededError, SpecValidationError
from .kernels import KernelFactory, MarkovKernel


class SystemSpec:
    """
    유한 알파벳 확률 제어 시스템

    상태 X_t 는 커널 P(X_t | X_[t-1], U_[t-1]) 를 따라 진화하고,
    단계 비용은 c(x, u) >= 0 이다.
    """

    def __init__(self, horizon, n_states, n_actions, kernel, cost,
                 state_labels=None, action_labels=None, source_mode=False, name=None):
        if int(horizon) != horizon or horizon < 1:
            raise SpecValidationError("horizon must be a positive integer", key="horizon")
        self.horizon = int(horizon)
        self.n_states = int(n_states)
        self.n_actions = int(n_actions)
        if self.n_states < 1 or self.n_actions < 1:
            raise SpecValidationError("alphabets must be nonempty")
        if (kernel.horizon, kernel.n_states, kernel.n_actions) != (self.horizon, self.n_states, self.n_actions):
            raise SpecValidationError(ERROR_MESSAGES["dimension_mismatch"] + " (kernel)")
        self.kernel = kernel
        self.cost = np.asarray(cost, dtype=float)
        if self.cost.shape != (self.n_states, self.n_actions):
            raise SpecValidationError(f"cost table must have shape ({self.n_states}, {self.n_actions})", key="cost")
        if not np.all(np.isfinite(self.cost)) or np.any(self.cost < 0):
            raise SpecValidationError(ERROR_MESSAGES["negative_cost"], key="cost")
        self.state_labels = list(state_labels) if state_labels else [str(i) for i in range(self.n_states)]
        self.action_labels = list(action_labels) if action_labels else [str(i) for i in range(self.n_actions)]
        self.source_mode = bool(source_mode)
        if self.source_mode and not kernel.ignores_actions():
            raise SpecValidationError("source mode requires a kernel that ignores past actions", key="mode")
        self.name = name or "system"

    @classmethod
    def markov(cls, horizon, initial, transition=None, cost=None, **kwargs):
        """
        Markov 모드 시스템 생성 헬퍼

        Args:
            horizon (int): 시간 지평
            initial (array): P(X_1)
            transition (array): (|X|,|U|,|X|) 또는 소스 모드의 (|X|,|X|); None 이면 i.i.d.
            cost (array): (|X|,|U|) 비용 테이블
        """
        cost = np.asarray(cost, dtype=float)
        n_states, n_actions = cost.shape
        kernel = MarkovKernel(horizon, n_states, n_actions, initial, transition)
        return cls(horizon, n_states, n_actions, kernel, cost, **kwargs)

    @classmethod
    def iid_source(cls, horizon, marginal, distortion, **kwargs):
        """비제어 i.i.d. 소스 (순차 율-왜곡 모드)"""
        kwargs.setdefault("source_mode", True)
        return cls.markov(horizon, marginal, None, distortion, **kwargs)

    @classmethod
    def from_kernel(cls, mode, horizon, cost, **tables):
        """팩토리를 통해 커널을 만들고 시스템 생성"""
        cost = np.asarray(cost, dtype=float)
        n_states, n_actions = cost.shape
        kernel = KernelFactory.create_kernel(mode, horizon, n_states, n_actions, **tables)
        return cls(horizon, n_states, n_actions, kernel, cost)

    def kernel_stage(self, t):
        """t 단계 조밀 커널 배열"""
        return self.kernel.stage_array(t)

    def trajectory_entries(self):
        """궤적 테이블 원소 개수 |X|^n |U|^n"""
        return (self.n_states * self.n_actions) ** self.horizon

    def check_budget(self, budget=None):
        """궤적 예산 초과 시 BudgetExceededError"""
        budget = MODEL_CONFIG["trajectory_budget"] if budget is None else budget
        entries = self.trajectory_entries()
        if entries > budget:
            raise BudgetExceededError(entries, budget)
        return entries

    def max_cost(self):
        return float(self.cost.max())

    def get_spec_info(self):
        """명세 요약 딕셔너리 반환"""
        return {
            'name': self.name,
            'horizon': self.horizon,
            'states': self.n_states,
            'actions': self.n_actions,
            'kernel_mode': self.kernel.get_mode_name(),
            'source_mode': self.source_mode
        }

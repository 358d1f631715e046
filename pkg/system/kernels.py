"""
상태 전이 커널 클래스와 팩토리

궤적 축은 (x1, u1, x2, u2, ..., xn, un) 순서로 교차 배치된다.
t 단계 커널 배열의 형태는 (|X|, |U|) * (t-1) + (|X|,) 이다.
"""

from abc import ABC, abstractmethod

import numpy as np

from config import ERROR_MESSAGES, MODEL_CONFIG
from .exceptions import SpecValidationError


def history_shape(length, n_states, n_actions):
    """교차 배치된 이력 접두부(길이 length)의 배열 형태"""
    return tuple(n_states if axis % 2 == 0 else n_actions for axis in range(length))


def check_rows(array, what, stage=None, tolerance=None):
    """마지막 축이 확률 벡터인지 검사"""
    tolerance = MODEL_CONFIG["row_tolerance"] if tolerance is None else tolerance
    array = np.asarray(array, dtype=float)
    if not np.all(np.isfinite(array)) or np.any(array < 0):
        raise SpecValidationError(f"{what}: entries must be finite and nonnegative", stage=stage)
    deviation = np.max(np.abs(array.sum(axis=-1) - 1.0)) if array.size else 0.0
    if deviation > tolerance:
        raise SpecValidationError(
            f"{ERROR_MESSAGES['row_not_normalized']} ({what}, deviation {deviation:.3g})", stage=stage)


class BaseKernel(ABC):
    """상태 전이 커널 기본 클래스"""

    def __init__(self, horizon, n_states, n_actions):
        self.horizon = horizon
        self.n_states = n_states
        self.n_actions = n_actions

    @abstractmethod
    def get_mode_name(self):
        """커널 모드 이름 반환"""
        pass

    @abstractmethod
    def stage_array(self, t):
        """t 단계(1부터) 조밀 커널 배열 반환"""
        pass

    @abstractmethod
    def validate(self):
        """행 정규화 및 형태 검사"""
        pass

    def ignores_actions(self):
        """커널이 과거 행동에 의존하지 않는지 여부 (소스 모드)"""
        for t in range(2, self.horizon + 1):
            array = self.stage_array(t)
            reference = array[tuple(slice(0, 1) if axis % 2 else slice(None)
                                    for axis in range(2 * (t - 1)))]
            if not np.array_equal(array, np.broadcast_to(reference, array.shape)):
                return False
        return True

    def get_kernel_info(self):
        """커널 정보 딕셔너리 반환"""
        return {
            'mode': self.get_mode_name(),
            'horizon': self.horizon,
            'states': self.n_states,
            'actions': self.n_actions
        }


class MarkovKernel(BaseKernel):
    """
    (x_{t-1}, u_{t-1})에만 의존하는 압축 커널

    transitions 는 (|X|, |U|, |X|) 배열 하나(시불변) 또는 단계별 목록이다.
    소스 모드에서는 (|X|, |X|) 형태도 허용하며 행동 축으로 복제된다.
    """

    def __init__(self, horizon, n_states, n_actions, initial, transitions=None):
        super().__init__(horizon, n_states, n_actions)
        self.initial = np.asarray(initial, dtype=float)
        if transitions is None:
            # i.i.d. 상태: 매 단계 초기 분포를 다시 뽑음
            transitions = np.broadcast_to(self.initial, (n_states, n_actions, n_states))
        if isinstance(transitions, (list, tuple)) and transitions and np.ndim(transitions[0]) == 3:
            self.transitions = [self._expand(T) for T in transitions]
        else:
            self.transitions = [self._expand(transitions)] * max(horizon - 1, 0)
        self.validate()

    def _expand(self, transition):
        transition = np.asarray(transition, dtype=float)
        if transition.ndim == 2:
            transition = np.broadcast_to(transition[:, None, :],
                                         (self.n_states, self.n_actions, self.n_states))
        return np.array(transition)

    def get_mode_name(self):
        return "markov"

    def validate(self):
        if self.initial.shape != (self.n_states,):
            raise SpecValidationError(f"{ERROR_MESSAGES['dimension_mismatch']}: initial distribution", stage=1)
        check_rows(self.initial, "initial distribution", stage=1)
        if len(self.transitions) != self.horizon - 1:
            raise SpecValidationError(f"expected {self.horizon - 1} transition matrices, got {len(self.transitions)}")
        for index, transition in enumerate(self.transitions, 2):
            if transition.shape != (self.n_states, self.n_actions, self.n_states):
                raise SpecValidationError(f"{ERROR_MESSAGES['dimension_mismatch']}: transition", stage=index)
            check_rows(transition, "transition", stage=index)

    def stage_array(self, t):
        if t == 1:
            return self.initial
        prefix = history_shape(2 * (t - 1), self.n_states, self.n_actions)
        compact = self.transitions[t - 2].reshape((1,) * (2 * (t - 2)) + self.transitions[t - 2].shape)
        return np.broadcast_to(compact, prefix + (self.n_states,))


class FullHistoryKernel(BaseKernel):
    """전체 이력 (x_{[t-1]}, u_{[t-1]})에 의존하는 커널"""

    def __init__(self, horizon, n_states, n_actions, stages):
        super().__init__(horizon, n_states, n_actions)
        self.stages = [np.asarray(stage, dtype=float) for stage in stages]
        self.validate()

    def get_mode_name(self):
        return "full-history"

    def validate(self):
        if len(self.stages) != self.horizon:
            raise SpecValidationError(f"expected {self.horizon} kernel stages, got {len(self.stages)}")
        for t, stage in enumerate(self.stages, 1):
            expected = history_shape(2 * (t - 1), self.n_states, self.n_actions) + (self.n_states,)
            if stage.shape != expected:
                raise SpecValidationError(
                    f"{ERROR_MESSAGES['dimension_mismatch']}: kernel shape {stage.shape}, expected {expected}", stage=t)
            check_rows(stage, "kernel", stage=t)

    def stage_array(self, t):
        return self.stages[t - 1]


class KernelFactory:
    """커널 팩토리 클래스"""

    # 지원하는 커널 모드 매핑
    KERNEL_CLASSES = {
        'markov': MarkovKernel,
        'full-history': FullHistoryKernel
    }

    @classmethod
    def create_kernel(cls, mode, horizon, n_states, n_actions, **tables):
        """
        모드에 따라 적절한 커널 객체 생성

        Args:
            mode (str): 커널 모드 ('markov' 또는 'full-history')
            horizon (int): 시간 지평 n
            n_states (int): 상태 알파벳 크기
            n_actions (int): 행동 알파벳 크기
            **tables: markov 는 initial/transitions, full-history 는 stages

        Returns:
            BaseKernel: 커널 객체

        Raises:
            SpecValidationError: 지원하지 않는 모드인 경우
        """
        if mode not in cls.KERNEL_CLASSES:
            raise SpecValidationError(f"unsupported kernel mode: {mode}", key="kernel.mode")
        return cls.KERNEL_CLASSES[mode](horizon, n_states, n_actions, **tables)

    @classmethod
    def get_supported_modes(cls):
        """지원하는 커널 모드 목록 반환"""
        return list(cls.KERNEL_CLASSES.keys())

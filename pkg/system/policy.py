"""
인과 정책 P(U_[n] || X_[n])
"""

import numpy as np

from config import ERROR_MESSAGES
from .exceptions import SpecValidationError
from .kernels import check_rows, history_shape


def interleave(x_hist, u_hist):
    """(x1..xt), (u1..u_{t-1}) 를 (x1,u1,...,xt) 인덱스 튜플로 교차 배치"""
    index = []
    for step, x in enumerate(x_hist):
        index.append(int(x))
        if step < len(u_hist):
            index.append(int(u_hist[step]))
    return tuple(index)


class CausalPolicy:
    """
    단계별, 이력별 조건부 행동 분포

    stages[t-1] 의 형태는 (|X|,|U|) * (t-1) + (|X|, |U|) 이며
    마지막 축이 P(U_t | X_[t], U_[t-1]) 이다.
    """

    def __init__(self, stages, n_states, n_actions, validate=True):
        self.n_states = int(n_states)
        self.n_actions = int(n_actions)
        self.stages = [np.asarray(stage, dtype=float) for stage in stages]
        self.horizon = len(self.stages)
        if validate:
            self.validate()

    def validate(self):
        """형태와 행 정규화 검사"""
        if self.horizon < 1:
            raise SpecValidationError("policy needs at least one stage")
        for t, stage in enumerate(self.stages, 1):
            expected = history_shape(2 * t, self.n_states, self.n_actions)
            if stage.shape != expected:
                raise SpecValidationError(
                    f"{ERROR_MESSAGES['dimension_mismatch']}: policy shape {stage.shape}, expected {expected}", stage=t)
            check_rows(stage, "policy", stage=t)

    def check_compatible(self, spec):
        """시스템 명세와 알파벳/지평 일치 여부 확인"""
        if (self.horizon, self.n_states, self.n_actions) != (spec.horizon, spec.n_states, spec.n_actions):
            raise SpecValidationError(
                f"{ERROR_MESSAGES['dimension_mismatch']}: policy (n={self.horizon}, |X|={self.n_states}, "
                f"|U|={self.n_actions}) vs spec (n={spec.horizon}, |X|={spec.n_states}, |U|={spec.n_actions})")

    # ----- 생성자 -----

    @classmethod
    def uniform(cls, horizon, n_states, n_actions):
        """모든 이력에서 균등 분포"""
        stages = [np.full(history_shape(2 * t, n_states, n_actions), 1.0 / n_actions)
                  for t in range(1, horizon + 1)]
        return cls(stages, n_states, n_actions)

    @classmethod
    def random(cls, horizon, n_states, n_actions, rng, concentration=1.0):
        """Dirichlet 난수 정책 (재시작 초기값)"""
        stages = []
        for t in range(1, horizon + 1):
            shape = history_shape(2 * t - 1, n_states, n_actions)
            stages.append(rng.dirichlet(np.full(n_actions, concentration), size=shape))
        return cls(stages, n_states, n_actions)

    @classmethod
    def from_actions(cls, actions, n_states, n_actions):
        """
        결정적 정책 생성

        Args:
            actions (list): 단계별 정수 배열, 형태 (|X|,|U|)*(t-1)+(|X|,)
        """
        stages = []
        for t, chosen in enumerate(actions, 1):
            chosen = np.asarray(chosen, dtype=int)
            expected = history_shape(2 * t - 1, n_states, n_actions)
            chosen = np.broadcast_to(chosen, expected)
            stages.append(np.eye(n_actions)[chosen])
        return cls(stages, n_states, n_actions)

    @classmethod
    def constant(cls, horizon, n_states, n_actions, action):
        """항상 같은 행동을 내는 정책"""
        actions = [np.full(history_shape(2 * t - 1, n_states, n_actions), action) for t in range(1, horizon + 1)]
        return cls.from_actions(actions, n_states, n_actions)

    @classmethod
    def open_loop(cls, sequence, n_states, n_actions):
        """상태를 무시하는 고정 행동열 정책"""
        actions = [np.full(history_shape(2 * t - 1, n_states, n_actions), a) for t, a in enumerate(sequence, 1)]
        return cls.from_actions(actions, n_states, n_actions)

    @classmethod
    def markov(cls, rows, n_states, n_actions):
        """
        (x_t, u_{t-1})에만 의존하는 정책을 전체 이력 형태로 전개

        Args:
            rows (list): rows[0] 형태 (|X|,|U|), rows[t-1] (t>=2) 형태 (|U|,|X|,|U|) = [u_{t-1}, x_t, u_t]
        """
        stages = []
        for t, row in enumerate(rows, 1):
            row = np.asarray(row, dtype=float)
            shape = history_shape(2 * t, n_states, n_actions)
            if t == 1:
                stages.append(np.array(np.broadcast_to(row, shape)))
            else:
                compact = row.reshape((1,) * (2 * t - 3) + row.shape)
                stages.append(np.array(np.broadcast_to(compact, shape)))
        return cls(stages, n_states, n_actions)

    @classmethod
    def memoryless(cls, rows, n_states, n_actions):
        """x_t 에만 의존하는 정책; rows[t-1] 형태 (|X|,|U|)"""
        stages = []
        for t, row in enumerate(rows, 1):
            row = np.asarray(row, dtype=float)
            compact = row.reshape((1,) * (2 * t - 2) + row.shape)
            stages.append(np.array(np.broadcast_to(compact, history_shape(2 * t, n_states, n_actions))))
        return cls(stages, n_states, n_actions)

    # ----- 조회 -----

    def row(self, t, x_hist, u_hist):
        """P(U_t | x_[t], u_[t-1]) 벡터"""
        return self.stages[t - 1][interleave(x_hist, u_hist)]

    def is_deterministic(self):
        return all(np.all((stage == 0) | (stage == 1)) for stage in self.stages)

    def ignores_state(self):
        """모든 단계에서 행이 x-이력에 의존하지 않는지 여부"""
        for t, stage in enumerate(self.stages, 1):
            reference = stage[tuple(slice(0, 1) if axis % 2 == 0 else slice(None) for axis in range(2 * t - 1))]
            if not np.allclose(stage, np.broadcast_to(reference, stage.shape), rtol=0, atol=1e-15):
                return False
        return True

    def mix_stage(self, other, t, alpha):
        """t 단계 행만 alpha : (1-alpha) 로 섞은 새 정책"""
        stages = [stage.copy() for stage in self.stages]
        stages[t - 1] = alpha * self.stages[t - 1] + (1.0 - alpha) * other.stages[t - 1]
        return CausalPolicy(stages, self.n_states, self.n_actions)

    def parameter_count(self):
        """자유 매개변수 개수 (행 수 x (|U|-1))"""
        return sum(int(np.prod(stage.shape[:-1])) * (self.n_actions - 1) for stage in self.stages)

    def to_lists(self):
        """JSON 직렬화용 중첩 리스트"""
        return [stage.tolist() for stage in self.stages]

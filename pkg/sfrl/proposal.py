"""
절단된 Poisson 제안 테이블
"""

from dataclasses import dataclass, field

import numpy as np

from system.exceptions import SpecValidationError


@dataclass
class ProposalTable:
    """
    한 행동 이력 문맥의 제안 테이블

    proposals[i] 는 문맥 주변 분포 q 에서 독립 추출한 행동이고,
    times[i] 는 단위율 Poisson 도착 시각 (증가 수열) 이다.
    """
    proposals: np.ndarray
    times: np.ndarray
    marginal: np.ndarray
    first_index: np.ndarray = field(init=False)
    first_time: np.ndarray = field(init=False)

    def __post_init__(self):
        self.proposals = np.asarray(self.proposals, dtype=int)
        self.times = np.asarray(self.times, dtype=float)
        self.marginal = np.asarray(self.marginal, dtype=float)
        if self.proposals.shape != self.times.shape or self.proposals.size < 1:
            raise SpecValidationError("proposal table needs M >= 1 proposals with matching times")
        n_actions = self.marginal.size
        # 행동별 첫 도착: 같은 행동 중에서는 가장 이른 도착이 항상 최소 가중치
        self.first_index = np.full(n_actions, self.size, dtype=int)
        self.first_time = np.full(n_actions, np.inf)
        for action in range(n_actions):
            hits = np.flatnonzero(self.proposals == action)
            if hits.size:
                self.first_index[action] = hits[0]
                self.first_time[action] = self.times[hits[0]]

    @property
    def size(self):
        return int(self.proposals.size)

    @classmethod
    def draw(cls, marginal, size, rng):
        """q 에서 size 개 제안과 Poisson 도착 시각 추출"""
        marginal = np.asarray(marginal, dtype=float)
        proposals = rng.choice(marginal.size, size=size, p=marginal / marginal.sum())
        times = np.cumsum(rng.exponential(1.0, size=size))
        return cls(proposals, times, marginal)

    def weights(self, conditional):
        """
        행동별 최소 선택 가중치 tau_a * q(a) / p(a)

        p(a) = 0 이거나 제안에 없는 행동은 +inf. 앞쪽 축은 배치로 취급한다.
        """
        conditional = np.asarray(conditional, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(conditional > 0, self.marginal / np.where(conditional > 0, conditional, 1.0), np.inf)
            weights = self.first_time * ratio
        return np.where(np.isfinite(self.first_time) & (conditional > 0), weights, np.inf)

    def select_index(self, conditional):
        """
        K = argmin_i T_i q(Y_i) / p(Y_i|.) (동률이면 작은 인덱스)

        Returns:
            np.ndarray: 선택된 제안 인덱스, 모든 가중치가 inf 인 행은 -1
        """
        weights = self.weights(conditional)
        smallest = weights.min(axis=-1, keepdims=True)
        tied = (weights == smallest) & np.isfinite(weights)
        keys = np.where(tied, self.first_index, self.size + 1)
        action = np.argmin(keys, axis=-1)
        index = self.first_index[action]
        return np.where(np.isfinite(smallest[..., 0]), index, -1)

    def select_action(self, conditional):
        """선택된 행동 (실패 행은 -1)"""
        index = self.select_index(conditional)
        return np.where(index >= 0, self.proposals[np.maximum(index, 0)], -1)

"""
SFRL 엔트로피 한계와 조건부 법칙 충실도 추정
"""

from dataclasses import dataclass

import numpy as np

from config import SFRL_CONFIG
from system.exceptions import SfrlTruncationError
from system.joint_law import stage_informations
from utils import logger, seed_stream
from .stage import build_stage, induced_actions, stage_entropy_given_z


def sfrl_bound(information):
    """I + log2(I + 3.4) + 1"""
    return information + np.log2(information + 3.4) + 1.0


@dataclass
class StageEntropyEstimate:
    """한 단계의 몬테카를로 H(U_t|U_[t-1],Z_t) 추정치와 정확한 I"""
    t: int
    mean: float
    standard_error: float
    information: float
    bound: float
    tables: int
    failures: int

    @property
    def slack(self):
        return self.bound - self.mean

    def holds(self, se_multiplier=2.0):
        return self.mean <= self.bound + se_multiplier * self.standard_error

    def to_dict(self):
        return {
            't': self.t,
            'mean': self.mean,
            'standard_error': self.standard_error,
            'information': self.information,
            'bound': self.bound,
            'slack': self.slack,
            'tables': self.tables,
            'failures': self.failures
        }


def estimate_stage_entropies(law, policy, M=None, seed=0, tables=1000):
    """
    단계별 H(U_t | U_[t-1], Z_t) 를 시드 고정 테이블 평균으로 추정

    Args:
        law (JointLaw): 정책이 유도한 결합 법칙
        policy (CausalPolicy): 근사 최적 정책
        M (int): 제안 개수
        seed (int): tables 스트림 시드
        tables (int): 단계당 테이블 수

    Returns:
        dict: stages (StageEntropyEstimate 목록), summed (Jensen 합산 한계 비교)
    """
    M = SFRL_CONFIG["truncation"] if M is None else M
    informations = stage_informations(law)
    estimates = []
    for t in range(1, law.horizon + 1):
        values, failures = [], 0
        for k in range(tables):
            stage = build_stage(t, law, policy, M, seed_stream(seed, "tables", k, t))
            try:
                values.append(stage_entropy_given_z(stage, law))
            except SfrlTruncationError:
                failures += 1
        values = np.asarray(values)
        mean = float(values.mean()) if values.size else float("nan")
        error = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0
        information = informations[t - 1]
        estimates.append(StageEntropyEstimate(t, mean, error, information, float(sfrl_bound(information)),
                                              int(values.size), failures))
        logger.debug(f"SFRL t={t}: H={mean:.5f}+-{error:.5f}, bound={sfrl_bound(information):.5f}")

    n = law.horizon
    average_information = sum(informations) / n
    average_entropy = sum(e.mean for e in estimates) / n
    average_error = float(np.sqrt(sum(e.standard_error ** 2 for e in estimates))) / n
    summed_bound = float(sfrl_bound(average_information))
    return {
        'stages': estimates,
        'summed': {
            'entropy': average_entropy,
            'standard_error': average_error,
            'information': average_information,
            'bound': summed_bound,
            'holds': average_entropy <= summed_bound + 2.0 * average_error
        }
    }


def pushforward_tv(t, law, policy, M=None, seed=0, tables=10000):
    """
    테이블 평균 밀어내기 조건부 법칙과 P(U_t|X_[t],U_[t-1]) 사이의 TV 거리

    이력 질량으로 가중한 평균 TV, 즉 결합 법칙 사이의 TV 를 돌려준다.
    """
    M = SFRL_CONFIG["truncation"] if M is None else M
    conditional = policy.stages[t - 1]
    reach = law.prefix_marginal(2 * t - 1)
    counts = np.zeros(conditional.shape)
    eye = np.eye(law.n_actions)
    used = 0
    for k in range(tables):
        stage = build_stage(t, law, policy, M, seed_stream(seed, "tables", k, t))
        actions = induced_actions(stage)
        if np.any((actions < 0) & (reach > 0)):
            continue
        counts += eye[np.maximum(actions, 0)]
        used += 1
    empirical = counts / max(used, 1)
    distance = 0.5 * float((reach[..., None] * np.abs(empirical - conditional)).sum())
    logger.debug(f"SFRL t={t}: pushforward TV={distance:.5f} over {used} tables (M={M})")
    return distance

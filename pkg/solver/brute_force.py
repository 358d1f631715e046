"""
작은 인스턴스용 전수 격자 탐색 오라클

각 정책 행의 확률 단체를 해상도 격자로 나누고 모든 조합을 배치 단위로
정확히 평가한다. 구조는 다음 중 하나로 매개변수화한다.

- 'full': 전체 이력 (x_[t], u_[t-1]) 마다 한 행
- 'markov': (u_{t-1}, x_t) 마다 한 행
- 'memoryless': x_t 마다 한 행
"""

import itertools

import numpy as np

from config import SOLVER_CONFIG
from system.exceptions import InfeasibleCostError, InstanceTooLargeError, SpecValidationError
from system.information import directed_information_array, expected_stage_costs
from system.joint_law import forward_product
from system.kernels import history_shape
from system.policy import CausalPolicy
from utils import logger
from .lagrangian import exact_point

STRUCTURES = ("full", "markov", "memoryless")


def simplex_grid(n_actions, resolution):
    """해상도 격자 위의 확률 벡터 목록 (꼭짓점 포함)"""
    steps = int(round(1.0 / resolution))
    if steps < 1 or abs(steps * resolution - 1.0) > 1e-9:
        raise SpecValidationError(f"resolution must divide 1, got {resolution}", key="resolution")
    points = [np.array(c) / steps for c in itertools.product(range(steps + 1), repeat=n_actions - 1)
              if sum(c) <= steps]
    return np.array([np.append(p, max(1.0 - p.sum(), 0.0)) for p in points])


def _stage_row_shapes(spec, structure):
    """단계별 압축 행 형태 (행동 축 제외)"""
    nx, nu = spec.n_states, spec.n_actions
    shapes = []
    for t in range(1, spec.horizon + 1):
        if structure == "full":
            shapes.append(history_shape(2 * t - 1, nx, nu))
        elif structure == "markov":
            shapes.append((nx,) if t == 1 else (nu, nx))
        else:
            shapes.append((nx,))
    return shapes


def _expand(compact, t, spec, structure, batch):
    """압축 행 배열 (배치 포함) 을 전체 이력 형태로 전개"""
    full = history_shape(2 * t, spec.n_states, spec.n_actions)
    rank = len(full) - (compact.ndim - 1)
    return np.broadcast_to(compact.reshape((batch,) + (1,) * rank + compact.shape[1:]), (batch,) + full)


class GridOracle:
    """격자 탐색 상태 (격자, 행 배치, 크기 검사)"""

    def __init__(self, spec, resolution, structure="full", max_params=None, max_grid=None):
        if structure not in STRUCTURES:
            raise SpecValidationError(f"unknown policy structure '{structure}'", key="structure")
        self.spec = spec
        self.structure = structure
        self.simplex = simplex_grid(spec.n_actions, resolution)
        self.shapes = _stage_row_shapes(spec, structure)
        self.rows = [int(np.prod(shape)) for shape in self.shapes]
        self.n_rows = sum(self.rows)
        self.parameters = self.n_rows * (spec.n_actions - 1)
        max_params = SOLVER_CONFIG["brute_force_max_params"] if max_params is None else max_params
        max_grid = SOLVER_CONFIG["brute_force_max_grid"] if max_grid is None else max_grid
        if self.parameters > max_params:
            raise InstanceTooLargeError(
                f"{self.parameters} policy parameters exceed the limit of {max_params}", key="brute-force")
        self.grid_size = len(self.simplex) ** self.n_rows
        if self.grid_size > max_grid:
            raise InstanceTooLargeError(
                f"grid of {self.grid_size} policies exceeds the limit of {int(max_grid)}", key="brute-force")
        spec.check_budget()

    def stages_for(self, flat):
        """평탄 인덱스 배치 -> 배치 축이 붙은 정책 단계 배열"""
        flat = np.atleast_1d(flat)
        batch = len(flat)
        choice = np.stack(np.unravel_index(flat, (len(self.simplex),) * self.n_rows), axis=1) \
            if self.n_rows else np.zeros((batch, 0), dtype=int)
        stages, offset = [], 0
        for t, (shape, count) in enumerate(zip(self.shapes, self.rows), 1):
            rows = self.simplex[choice[:, offset:offset + count]]
            offset += count
            stages.append(_expand(rows.reshape((batch,) + shape + (self.spec.n_actions,)), t,
                                  self.spec, self.structure, batch))
        return stages

    def policy_for(self, index):
        stages = [stage[0] for stage in self.stages_for(np.array([index]))]
        return CausalPolicy([np.array(s) for s in stages], self.spec.n_states, self.spec.n_actions)

    def evaluate(self, batch_size=None):
        """
        모든 격자 정책의 (rate, cost) 를 배치로 생성

        Yields:
            tuple: (평탄 인덱스 배열, rate 배열, cost 배열)
        """
        spec = self.spec
        batch_size = batch_size or SOLVER_CONFIG["brute_force_batch"]
        kernels = [spec.kernel_stage(t) for t in range(1, spec.horizon + 1)]
        for start in range(0, self.grid_size, batch_size):
            flat = np.arange(start, min(start + batch_size, self.grid_size))
            table = forward_product(kernels, self.stages_for(flat))
            rates = directed_information_array(table, spec.horizon) / spec.horizon
            costs = sum(expected_stage_costs(table, spec.horizon, spec.cost)) / spec.horizon
            yield flat, np.asarray(rates), np.asarray(costs)


def brute_force_fn(spec, D, resolution=0.01, structure="full"):
    """
    격자 전수 탐색으로 비용 <= D 인 최소 율 점 계산

    Args:
        spec (SystemSpec): 시스템 명세 (정책 매개변수 12개 이하)
        D (float): 비용 한도
        resolution (float): 단체 격자 간격 (1 의 약수)
        structure (str): 'full' | 'markov' | 'memoryless'

    Returns:
        RateCostPoint: 격자 최적점 (동률이면 낮은 비용, 다음으로 작은 인덱스)

    Raises:
        InstanceTooLargeError: 매개변수/격자 크기 초과
        InfeasibleCostError: 격자의 어떤 정책도 비용 D 이하가 아님
    """
    oracle = GridOracle(spec, resolution, structure)
    best = None
    cheapest = np.inf
    for flat, rates, costs in oracle.evaluate():
        cheapest = min(cheapest, float(costs.min()))
        feasible = np.nonzero(costs <= D + 1e-12)[0]
        if feasible.size == 0:
            continue
        order = np.lexsort((costs[feasible], rates[feasible]))
        i = feasible[order[0]]
        candidate = (float(rates[i]), float(costs[i]), int(flat[i]))
        if best is None or candidate < best:
            best = candidate
    if best is None:
        raise InfeasibleCostError(D, cheapest)
    logger.debug(f"격자 오라클({structure}, {oracle.grid_size}점): rate={best[0]:.6f}, cost={best[1]:.6f}")
    return exact_point(spec, oracle.policy_for(best[2]), 0.0, source="brute-force")


def brute_force_lagrangian(spec, mu, resolution=0.01, structure="full"):
    """격자 전수 탐색으로 rate + mu * cost 최소점 계산"""
    oracle = GridOracle(spec, resolution, structure)
    best = None
    for flat, rates, costs in oracle.evaluate():
        objective = rates + mu * costs
        i = int(np.argmin(objective))
        candidate = (float(objective[i]), int(flat[i]))
        if best is None or candidate < best:
            best = candidate
    return exact_point(spec, oracle.policy_for(best[1]), mu, source="brute-force")

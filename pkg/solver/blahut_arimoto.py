"""
단일 문자(single-letter) 율-왜곡 함수 Blahut-Arimoto 계산기
"""

import numpy as np

from system.exceptions import InfeasibleCostError
from system.information import binary_entropy, mutual_information
from utils import logger


def blahut_arimoto(px, cost, slope, tolerance=1e-13, max_iterations=20000):
    """
    기울기 slope 에서 I(X;U) + slope * E[d(X,U)] 를 최소화하는 시험 채널

    Args:
        px (array): 원천 분포 P(X)
        cost (array): (|X|,|U|) 왜곡 행렬
        slope (float): 라그랑주 기울기 (>= 0, 자연로그 단위)
        tolerance (float): 출력 분포 변화량 종료 기준
        max_iterations (int): 최대 반복 횟수

    Returns:
        tuple: (rate 비트, distortion, 시험 채널 P(U|X), 출력 분포 q)
    """
    px = np.asarray(px, dtype=float)
    cost = np.asarray(cost, dtype=float)
    q = np.full(cost.shape[1], 1.0 / cost.shape[1])
    weights = np.exp(-slope * (cost - cost.min(axis=1, keepdims=True)))
    for _ in range(int(max_iterations)):
        channel = q * weights
        channel /= channel.sum(axis=1, keepdims=True)
        q_new = px @ channel
        change = np.abs(q_new - q).max()
        q = q_new
        if change < tolerance:
            break
    channel = q * weights
    channel /= channel.sum(axis=1, keepdims=True)
    joint = px[:, None] * channel
    return mutual_information(joint), float((joint * cost).sum()), channel, q


def rate_distortion(px, cost, D, tolerance=1e-10, max_steps=200):
    """
    R(D) = min I(X;U) s.t. E[d] <= D (비트)

    기울기에 대한 로그 이분법으로 왜곡을 D 에 맞춘다.

    Raises:
        InfeasibleCostError: D 가 sum_x p(x) min_u d(x,u) 보다 작을 때
    """
    px = np.asarray(px, dtype=float)
    cost = np.asarray(cost, dtype=float)
    floor = float(px @ cost.min(axis=1))
    if D < floor - 1e-12:
        raise InfeasibleCostError(D, floor)
    if D >= float((px @ cost).min()):
        return 0.0
    low, high = 0.0, 1.0
    while blahut_arimoto(px, cost, high)[1] > D:
        high *= 2.0
        if high > 2.0 ** 40:
            return blahut_arimoto(px, cost, high)[0]
    rate = blahut_arimoto(px, cost, high)[0]
    for _ in range(max_steps):
        mid = 0.5 * (low + high) if low == 0 else np.sqrt(low * high)
        rate_mid, distortion, _, _ = blahut_arimoto(px, cost, mid)
        if distortion > D:
            low = mid
        else:
            high, rate = mid, rate_mid
            if D - distortion <= tolerance:
                break
    logger.debug(f"R({D:.6g}) = {rate:.6f} bits (slope {high:.6g})")
    return float(rate)


def binary_rate_distortion(p, D):
    """Bernoulli(p) 원천, 해밍 왜곡의 닫힌 형태 h(p) - h(D)"""
    p = min(p, 1.0 - p)
    if D >= p:
        return 0.0
    return float(binary_entropy(p) - binary_entropy(D))

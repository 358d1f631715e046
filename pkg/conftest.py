"""
공통 pytest 픽스처

저장소 루트의 conftest 이므로 pytest 가 루트를 sys.path 에 넣어
config, utils, system 등 최상위 패키지를 그대로 import 할 수 있다.
"""

import os

import numpy as np
import pytest

from solver import SolverOptions
from system import SystemSpec, load_spec
from utils import logger

SPEC_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "specs")

FLIP_TRANSITION = [[[0.9, 0.1], [0.1, 0.9]], [[0.1, 0.9], [0.9, 0.1]]]
FLIP_COST = [[0.0, 0.05], [1.0, 1.05]]


def spec_path(name):
    return os.path.join(SPEC_DIR, f"{name}.json")


@pytest.fixture(autouse=True)
def quiet_logger():
    """테스트 중에는 경고 이상만 출력"""
    previous = logger.level
    logger.set_level("WARN")
    yield logger
    logger.set_level(previous)


@pytest.fixture()
def flip_n2():
    return load_spec(spec_path("flip_n2"))


@pytest.fixture()
def flip_n3():
    return load_spec(spec_path("flip_n3"))


@pytest.fixture()
def cost_free():
    return load_spec(spec_path("cost_free"))


@pytest.fixture()
def bernoulli_source():
    return load_spec(spec_path("bernoulli_source"))


@pytest.fixture()
def single_action():
    """|U| = 1 인 시스템 (율 0 이 유일한 선택)"""
    transition = [[[0.8, 0.2]], [[0.3, 0.7]]]
    return SystemSpec.markov(2, [0.5, 0.5], transition, [[0.0], [1.0]], name="single_action")


@pytest.fixture()
def quick_options():
    return SolverOptions().quick(restarts=2)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 기본 옵션 합성처럼 몇 분 걸리는 테스트 (-m 'not slow' 로 제외)")


@pytest.fixture()
def flip_n4():
    return load_spec(spec_path("flip_n4"))

"""
JSON 명세 파일(SpecFile) 로더
"""

import json

import numpy as np

from config import FILE_CONFIG, MODEL_CONFIG
from utils import logger
from .exceptions import SpecFormatError
from .kernels import KernelFactory
from .spec import SystemSpec


def _get_value(document, keys, default=None):
    """여러 후보 키 중 처음 존재하는 값 반환"""
    for key in keys:
        if key in document:
            return document[key]
    return default


def _require(document, key, where="spec"):
    if key not in document:
        raise SpecFormatError(f"missing required key in {where}", key=key)
    return document[key]


def _alphabet(value, key):
    """정수 크기 또는 레이블 목록을 (크기, 레이블) 로 변환"""
    if isinstance(value, bool):
        raise SpecFormatError("alphabet must be a positive integer or a list of labels", key=key)
    if isinstance(value, int):
        if value < 1:
            raise SpecFormatError("alphabet size must be positive", key=key)
        return value, None
    if isinstance(value, list) and value:
        return len(value), [str(label) for label in value]
    raise SpecFormatError("alphabet must be a positive integer or a list of labels", key=key)


def normalize_rows(table, key, accept=None, renormalize=None):
    """
    확률 행 정규화 검사 및 보정

    편차가 accept 이하이면 조용히, renormalize 이하이면 경고 후 재정규화하고
    그보다 크면 거부한다.

    Args:
        table: 마지막 축이 확률 벡터인 중첩 리스트
        key (str): 진단 메시지에 쓰일 키 경로

    Returns:
        np.ndarray: 행 합이 정확히 1 인 배열

    Raises:
        SpecFormatError: 음수/비유한 값 또는 허용 편차 초과
    """
    accept = MODEL_CONFIG["file_accept_tolerance"] if accept is None else accept
    renormalize = MODEL_CONFIG["file_renormalize_tolerance"] if renormalize is None else renormalize
    try:
        array = np.asarray(table, dtype=float)
    except (TypeError, ValueError):
        raise SpecFormatError("probability table is ragged or not numeric", key=key)
    if array.size == 0 or not np.all(np.isfinite(array)) or np.any(array < 0):
        raise SpecFormatError("probability entries must be finite and nonnegative", key=key)
    sums = array.sum(axis=-1, keepdims=True)
    deviation = float(np.max(np.abs(sums - 1.0)))
    if deviation > renormalize:
        raise SpecFormatError(f"row sums deviate from 1 by {deviation:.3g}", key=key)
    if deviation > accept:
        logger.warning(f"{key}: row sums deviate from 1 by {deviation:.3g}, renormalizing")
    return array / sums


def _build_kernel_tables(kernel_doc, horizon):
    mode = _get_value(kernel_doc, ["mode", "type"], "markov")
    if mode not in KernelFactory.get_supported_modes():
        raise SpecFormatError(f"unsupported kernel mode '{mode}'", key="kernel.mode")
    if mode == "markov":
        initial = normalize_rows(_require(kernel_doc, "initial", "kernel"), "kernel.initial")
        transitions = _get_value(kernel_doc, ["transition", "transitions"])
        if transitions is None or horizon == 1:
            return mode, {"initial": initial, "transitions": None}
        if "transitions" in kernel_doc and isinstance(transitions, list) and len(transitions) == horizon - 1 \
                and np.ndim(transitions) == 4:
            tables = [normalize_rows(T, f"kernel.transitions[{i}]") for i, T in enumerate(transitions)]
            return mode, {"initial": initial, "transitions": tables}
        return mode, {"initial": initial, "transitions": normalize_rows(transitions, "kernel.transition")}
    stages = _require(kernel_doc, "stages", "kernel")
    if not isinstance(stages, list):
        raise SpecFormatError("full-history kernel stages must be a list", key="kernel.stages")
    return mode, {"stages": [normalize_rows(stage, f"kernel.stages[{i}]") for i, stage in enumerate(stages)]}


def spec_from_document(document, name=None):
    """
    파싱된 JSON 문서로부터 SystemSpec 생성

    Raises:
        SpecFormatError: 누락/형식 오류 (문제 키 포함)
        SpecValidationError: 차원 불일치 등 모델 검증 오류
    """
    if not isinstance(document, dict):
        raise SpecFormatError("top-level JSON value must be an object", key="<root>")
    horizon = _require(document, "horizon")
    if isinstance(horizon, bool) or not isinstance(horizon, int) or horizon < 1:
        raise SpecFormatError("horizon must be a positive integer", key="horizon")
    n_states, state_labels = _alphabet(_require(document, "states"), "states")
    n_actions, action_labels = _alphabet(_require(document, "actions"), "actions")

    try:
        cost = np.asarray(_require(document, "cost"), dtype=float)
    except (TypeError, ValueError):
        raise SpecFormatError("cost table is ragged or not numeric", key="cost")
    if cost.shape != (n_states, n_actions):
        raise SpecFormatError(f"cost table must have shape ({n_states}, {n_actions}), got {cost.shape}", key="cost")

    kernel_doc = _require(document, "kernel")
    if not isinstance(kernel_doc, dict):
        raise SpecFormatError("kernel must be an object", key="kernel")
    mode, tables = _build_kernel_tables(kernel_doc, horizon)
    source_mode = document.get("mode", "control") == "source"
    if document.get("mode", "control") not in ("control", "source"):
        raise SpecFormatError("mode must be 'control' or 'source'", key="mode")

    kernel = KernelFactory.create_kernel(mode, horizon, n_states, n_actions, **tables)
    return SystemSpec(horizon, n_states, n_actions, kernel, cost,
                      state_labels=state_labels, action_labels=action_labels,
                      source_mode=source_mode, name=document.get("name", name))


def load_spec(path, encoding=None):
    """
    SpecFile 경로에서 SystemSpec 로드

    Args:
        path (str): JSON 파일 경로
        encoding (str): 파일 인코딩 (기본 utf-8)

    Returns:
        SystemSpec: 검증된 시스템 명세
    """
    encoding = encoding or FILE_CONFIG["encoding"]
    try:
        with open(path, "r", encoding=encoding) as handle:
            document = json.load(handle)
    except json.JSONDecodeError as e:
        raise SpecFormatError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}", key=str(path))
    except OSError as e:
        raise SpecFormatError(f"cannot read spec file: {e.strerror}", key=str(path))
    spec = spec_from_document(document, name=str(path).replace("\\", "/").rsplit("/", 1)[-1].rsplit(".", 1)[0])
    logger.info(f"명세 로드: {spec.name} (n={spec.horizon}, |X|={spec.n_states}, |U|={spec.n_actions})")
    return spec


def spec_to_document(spec):
    """SystemSpec 을 SpecFile 형식 딕셔너리로 변환 (Markov/전체 이력 모두)"""
    kernel = spec.kernel
    if kernel.get_mode_name() == "markov":
        kernel_doc = {"mode": "markov", "initial": kernel.initial.tolist(),
                      "transitions": [T.tolist() for T in kernel.transitions]}
    else:
        kernel_doc = {"mode": "full-history", "stages": [stage.tolist() for stage in kernel.stages]}
    return {
        "name": spec.name,
        "horizon": spec.horizon,
        "states": list(spec.state_labels),
        "actions": list(spec.action_labels),
        "kernel": kernel_doc,
        "cost": spec.cost.tolist(),
        "mode": "source" if spec.source_mode else "control"
    }

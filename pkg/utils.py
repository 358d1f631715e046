"""
공통 유틸리티 함수들
"""

import datetime
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from config import ENV_PREFIX, SIMULATION_CONFIG


def validate_probability(value):
    """[0, 1] 구간 확률값 유효성 검사"""
    try:
        number = float(value)
        return 0.0 <= number <= 1.0
    except (ValueError, TypeError):
        return False


def get_log_timestamp():
    """로그용 시간 스탬프 반환"""
    return datetime.datetime.now().strftime("%H:%M:%S")


def ensure_directory_exists(directory_path):
    """디렉토리가 존재하지 않으면 생성"""
    try:
        Path(directory_path).mkdir(parents=True, exist_ok=True)
        return True
    except OSError:
        return False


def write_atomic(path, text, encoding="utf-8"):
    """
    임시 파일에 쓴 뒤 rename 하여 원자적으로 저장

    Args:
        path (str): 저장할 파일 경로
        text (str | bytes): 파일 내용
        encoding (str): 텍스트 인코딩

    Returns:
        str: 저장된 파일 경로
    """
    directory = os.path.dirname(os.path.abspath(path))
    ensure_directory_exists(directory)
    binary = isinstance(text, (bytes, bytearray))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb" if binary else "w", **({} if binary else {"encoding": encoding, "newline": ""})) as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    return path


def env_default(flag, fallback=None, cast=str):
    """
    CLI 플래그에 대응하는 RATECOST_* 환경 변수 값 반환

    Args:
        flag (str): 플래그 이름 (예: 'trials', 'spec')
        fallback: 환경 변수가 없을 때 기본값
        cast (callable): 값 변환 함수
    """
    name = ENV_PREFIX + flag.upper().replace("-", "_")
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return fallback
    return cast(raw)


def seed_stream(seed, stream, *keys):
    """
    이름 붙은 시드 스트림에서 독립 난수 생성기 생성

    (seed, stream, keys...) 조합마다 서로 독립인 numpy Generator 를 돌려준다.
    스케줄링 순서와 무관하게 같은 입력이면 같은 난수열이 나온다.
    """
    stream_id = SIMULATION_CONFIG["seed_streams"][stream]
    sequence = np.random.SeedSequence(int(seed), spawn_key=(stream_id,) + tuple(int(k) for k in keys))
    return np.random.default_rng(sequence)


class Logger:
    """간단한 로거 클래스"""

    LEVELS = {"DEBUG": 10, "INFO": 20, "SUCCESS": 25, "WARN": 30, "ERROR": 40}

    def __init__(self, stream=None, level="INFO"):
        self.stream = stream
        self.level = level
        self.records = []

    def log(self, message, level="INFO"):
        """로그 메시지 출력"""
        timestamp = get_log_timestamp()
        formatted_message = f"[{timestamp}] [{level}] {message}"
        self.records.append((level, message))
        if len(self.records) > 1000:
            del self.records[:500]

        if self.LEVELS.get(level, 20) < self.LEVELS.get(self.level, 20):
            return

        stream = self.stream if self.stream is not None else sys.stderr
        try:
            stream.write(formatted_message + "\n")
            stream.flush()
        except (ValueError, OSError):
            pass  # 닫힌 스트림은 무시

    def set_level(self, level):
        """출력 최소 레벨 변경"""
        self.level = level

    def debug(self, message):
        """디버그 로그"""
        self.log(message, "DEBUG")

    def info(self, message):
        """정보 로그"""
        self.log(message, "INFO")

    def error(self, message):
        """에러 로그"""
        self.log(message, "ERROR")

    def warning(self, message):
        """경고 로그"""
        self.log(message, "WARN")

    def success(self, message):
        """성공 로그"""
        self.log(message, "SUCCESS")


# 싱글톤 인스턴스
logger = Logger()

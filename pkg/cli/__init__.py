"""
명령줄 인터페이스 모듈

주요 클래스:
- RateCostApp: solve / synth / lqg / rd 하위 명령
- ResultCollector: ResultBundle JSON/CSV 구성 (싱글톤 result_collector)

사용 예시:
    from cli import RateCostApp

    exit_code = RateCostApp().run(["lqg", "--a", "2", "--b", "1", "--q", "1", "--r", "0",
                                   "--sigma2", "1", "--D", "2"])
"""

from .result_collector import ResultCollector, result_collector
from .app import RateCostApp

__all__ = [
    'RateCostApp',
    'ResultCollector',
    'result_collector'
]

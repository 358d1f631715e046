"""
율-비용 툴킷 명령줄 애플리케이션
메인 진입점
"""

import sys

from cli import RateCostApp

if __name__ == "__main__":
    app = RateCostApp()
    sys.exit(app.run())

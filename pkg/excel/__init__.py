"""
Excel 보고서 생성 모듈

이 모듈은 명령 결과(ResultBundle)를 요약/곡선/시뮬레이션 시트로 구성된 Excel 보고서로 만듭니다.

주요 클래스:
- RateCostExcelGenerator: Excel 보고서 생성기

사용 예시:
    from cli import result_collector
    from excel import excel_generator

    formatted = result_collector.format_result_for_excel(result)
    excel_path = excel_generator.generate_excel(formatted, "report.xlsx")
"""

from .excel_generator import RateCostExcelGenerator, excel_generator

__all__ = [
    'RateCostExcelGenerator',
    'excel_generator'
]

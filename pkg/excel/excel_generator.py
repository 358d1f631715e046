"""
율-비용 결과 Excel 보고서 생성기
"""

import io

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

from utils import write_atomic

FONT_NAME = '맑은 고딕'
HEADER_FILL = 'D9E1F2'
FAIL_COLOR = 'C00000'
NUMBER_FORMAT = '0.000000000'


def _style(size=10, bold=False, align='center', fill=None, color=None, number_format=None):
    """셀 스타일 딕셔너리 (cell 속성 이름 -> 값)"""
    edge = Side(style='thin')
    style = {
        'font': Font(name=FONT_NAME, size=size, bold=bold, color=color),
        'alignment': Alignment(horizontal=align, vertical='center'),
        'border': Border(left=edge, right=edge, top=edge, bottom=edge)
    }
    if fill:
        style['fill'] = PatternFill(start_color=fill, end_color=fill, fill_type='solid')
    if number_format:
        style['number_format'] = number_format
    return style


class RateCostExcelGenerator:
    """ResultBundle Excel 보고서 생성 클래스"""

    def __init__(self):
        self.workbook = None
        self.styles = {
            'label': _style(11, bold=True, fill=HEADER_FILL),
            'text': _style(11, align='left'),
            'heading': _style(11, bold=True, fill=HEADER_FILL),
            'number': _style(align='right', number_format=NUMBER_FORMAT),
            'plain': _style(),
            'fail': _style(bold=True, color=FAIL_COLOR)
        }

    def generate_excel(self, formatted, save_path):
        """
        포맷된 결과로 Excel 보고서 생성

        Args:
            formatted (dict): result_collector.format_result_for_excel 결과
            save_path (str): 보고서 경로

        Returns:
            str: 저장한 경로 (원자적 쓰기)
        """
        self.workbook = Workbook()
        self.workbook.remove(self.workbook.active)

        self._summary_sheet(formatted)
        if formatted.get('curve'):
            self._table_sheet("곡선", formatted['curve_header'], formatted['curve'])
        if formatted.get('trials'):
            self._table_sheet("시뮬레이션", ['trial', 'bits', 'cost', 'q'], formatted['trials'])

        buffer = io.BytesIO()
        self.workbook.save(buffer)
        return write_atomic(save_path, buffer.getvalue())

    def _summary_sheet(self, formatted):
        """요약 + 검증 원장 시트"""
        ws = self.workbook.create_sheet("요약")
        for label, value in formatted['summary']:
            ws.append([str(label), self._cell_value(value)])
            self._style_row(ws, ws.max_row, ['label', 'number' if isinstance(value, float) else 'text'])

        if formatted.get('ledger'):
            ws.append([])
            ws.append(['항목', 'lhs', 'rhs', '여유', '결과'])
            self._style_row(ws, ws.max_row, ['heading'] * 5)
            for name, lhs, rhs, margin, verdict in formatted['ledger']:
                ws.append([name] + [self._cell_value(v) for v in (lhs, rhs, margin)] + [verdict])
                self._style_row(ws, ws.max_row, ['text'] + ['number'] * 3 + ['plain' if verdict == 'PASS' else 'fail'])

        for letter, width in zip("ABCDE", (34, 22, 22, 22, 10)):
            ws.column_dimensions[letter].width = width

    def _table_sheet(self, title, headers, rows):
        """헤더 한 줄 + 수치 행 시트"""
        ws = self.workbook.create_sheet(title)
        ws.append(list(headers))
        self._style_row(ws, 1, ['heading'] * len(headers))
        for values in rows:
            ws.append([self._cell_value(v) for v in values])
            self._style_row(ws, ws.max_row, ['number' if isinstance(v, float) else 'plain' for v in values])
        for col in range(1, len(headers) + 1):
            ws.column_dimensions[get_column_letter(col)].width = 18
        ws.freeze_panes = 'A2'

    def _style_row(self, ws, row, names):
        for col, name in enumerate(names, 1):
            cell = ws.cell(row=row, column=col)
            for attribute, value in self.styles[name].items():
                setattr(cell, attribute, value)

    @staticmethod
    def _cell_value(value):
        if value is None:
            return '-'
        if isinstance(value, bool):
            return 'true' if value else 'false'
        if isinstance(value, (list, tuple, dict)):
            return str(value)
        return value


excel_generator = RateCostExcelGenerator()

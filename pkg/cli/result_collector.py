"""
명령 결과 수집기 (ResultBundle 구성)
"""

import csv
import io
import json
import math

import numpy as np

from config import APP_CONFIG
from utils import write_atomic


class ResultCollector:
    """명령별 결과를 JSON 직렬화 가능한 ResultBundle 딕셔너리로 정리하는 클래스"""

    def __init__(self):
        self.last_result = None

    def _header(self, command):
        return {
            'program': APP_CONFIG["name"],
            'version': APP_CONFIG["version"],
            'schema_version': APP_CONFIG["schema_version"],
            'command': command
        }

    def collect_curve(self, spec, rows, points, options):
        """
        solve 명령 결과

        Args:
            spec (SystemSpec): 시스템 명세
            rows (list): (D, F_n(D), mu) 행
            points (list): RateCostPoint 목록
            options (SolverOptions): 사용한 솔버 옵션
        """
        result = self._header("solve")
        result.update({
            'spec': spec.get_spec_info(),
            'solver': {'restarts': options.restarts, 'restart_seed': options.restart_seed,
                       'step_size': options.step_size, 'tolerance': options.tolerance},
            'curve': [{'D': D, 'F_n': F, 'mu': mu} for D, F, mu in rows],
            'points': [point.to_dict() for point in points]
        })
        return self._store(result)

    def collect_synthesis(self, bundle, report, ledger):
        """synth 명령 결과 (방식 요약 + 시뮬레이션 + 원장)"""
        result = self._header("synth")
        result.update({
            'spec': bundle.spec.get_spec_info(),
            'scheme': bundle.digest(),
            'simulation': report.to_dict(),
            'ledger': ledger.to_dict()
        })
        return self._store(result)

    def collect_lqg(self, spec, derived, rows):
        """lqg 명령 결과"""
        result = self._header("lqg")
        result.update({
            'system': spec.to_dict(),
            'derived': derived.to_dict(),
            'curve': [{'D': D, 'F': F} for D, F in rows]
        })
        return self._store(result)

    def collect_rd(self, spec, rows, horizon):
        """
        rd 명령 결과

        Args:
            rows (list): D 별 딕셔너리 (F_n, reference, upper, gap_shrinkage)
        """
        result = self._header("rd")
        result.update({
            'spec': spec.get_spec_info(),
            'horizon': horizon,
            'rows': rows
        })
        return self._store(result)

    def _store(self, result):
        self.last_result = self.clean(result)
        return self.last_result

    def clean(self, value):
        """numpy 값을 파이썬 값으로, inf/nan 을 None 으로 바꾼다"""
        if isinstance(value, dict):
            return {str(key): self.clean(item) for key, item in value.items()}
        if isinstance(value, (list, tuple)):
            return [self.clean(item) for item in value]
        if isinstance(value, np.ndarray):
            return self.clean(value.tolist())
        if isinstance(value, np.generic):
            value = value.item()
        if isinstance(value, float) and not math.isfinite(value):
            return None
        return value

    def to_json(self, result=None):
        """정렬된 키, 두 칸 들여쓰기 JSON (시각 정보 없음)"""
        result = self.last_result if result is None else result
        return json.dumps(result, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"

    def write_json(self, path, result=None):
        return write_atomic(path, self.to_json(result))

    def write_csv(self, path, header, rows, comments=()):
        """주석 행(# ...) + 헤더 + 데이터 행 CSV 저장"""
        buffer = io.StringIO()
        for comment in comments:
            buffer.write(f"# {comment}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None or (isinstance(v, float) and not math.isfinite(v)) else v
                             for v in row])
        return write_atomic(path, buffer.getvalue())

    def format_result_for_excel(self, result=None):
        """
        Excel 생성을 위한 결과 포맷

        Returns:
            dict: summary (라벨, 값) 목록, curve 행, trials 행, ledger 항목
        """
        result = self.last_result if result is None else result
        if not result:
            return None
        summary = [('명령', result['command']), ('버전', result['version']),
                   ('스키마', result['schema_version'])]
        for key, value in sorted(result.get('spec', result.get('system', {})).items()):
            summary.append((key, value))
        formatted = {'summary': summary, 'curve': [], 'curve_header': [], 'trials': [], 'ledger': []}

        if result['command'] == "solve":
            formatted['curve_header'] = ['D', 'F_n(D)', 'mu']
            formatted['curve'] = [(row['D'], row['F_n'], row['mu']) for row in result['curve']]
        elif result['command'] == "lqg":
            formatted['summary'].extend(sorted(result['derived'].items()))
            formatted['curve_header'] = ['D', 'F(D)']
            formatted['curve'] = [(row['D'], row['F']) for row in result['curve']]
        elif result['command'] == "rd":
            formatted['curve_header'] = ['D', 'F_n(D)', 'R(D)', 'upper']
            formatted['curve'] = [(row['D'], row['F_n'], row['reference'], row['upper']) for row in result['rows']]
        elif result['command'] == "synth":
            scheme, simulation = result['scheme'], result['simulation']
            for key in ('D', 'eps', 'gamma', 'F_n', 'rate_target', 'eps_admissible'):
                formatted['summary'].append((key, scheme[key]))
            formatted['summary'].append(('lambda', scheme['selector']['lambda']))
            for key in ('exact_rate', 'exact_cost', 'empirical_rate', 'rate_se', 'empirical_cost', 'cost_se'):
                formatted['summary'].append((key, simulation[key]))
            formatted['summary'].append(('검증', 'PASS' if result['ledger']['passed'] else 'FAIL'))
            formatted['ledger'] = [(e['name'], e['lhs'], e['rhs'], e['margin'], 'PASS' if e['passed'] else 'FAIL')
                                   for e in result['ledger']['entries']]
        return formatted


# 싱글톤 인스턴스
result_collector = ResultCollector()

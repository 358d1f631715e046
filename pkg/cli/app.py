"""
율-비용 툴킷 명령줄 애플리케이션

ratecost solve|synth|lqg|rd --spec <path> --D <v> [--eps <v> --gamma <v> --trials <n> --seed <s> --out <dir>]
모든 플래그는 RATECOST_<FLAG> 환경 변수로도 줄 수 있으며 명시한 플래그가 우선한다.
"""

import argparse
import os
import sys
import time

import numpy as np

from config import APP_CONFIG, EXIT_CODES, FILE_CONFIG, SIMULATION_CONFIG, SFRL_CONFIG, TIMESHARE_CONFIG
from excel import excel_generator
from lqg import ScalarLqgSpec, default_grid, f_curve, riccati_solve
from simulation import (
    achievability_bound, gap_shrinkage_table, run_trials, synthesize, verify_sandwich
)
from solver import SolverOptions, rate_distortion, solve_fn, sweep_curve
from system import RateCostError, SpecValidationError, SystemSpec, load_spec
from utils import env_default, logger, validate_probability
from .result_collector import result_collector


def _float_list(text):
    """'0.1,0.2' 또는 '0.1 0.2' -> [0.1, 0.2]"""
    return [float(v) for v in text.replace(",", " ").split()]


def _flag_bool(text):
    return str(text).strip().lower() in ("1", "true", "yes", "on")


class RateCostApp:
    """명령줄 애플리케이션 클래스"""

    def __init__(self, stdout=None, stderr=None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.parser = self.build_parser()

    def build_parser(self):
        """하위 명령과 환경 변수 기본값을 가진 파서 생성"""
        parser = argparse.ArgumentParser(prog=APP_CONFIG["name"], description=APP_CONFIG["title"])
        parser.add_argument("--version", action="version", version=f"%(prog)s {APP_CONFIG['version']}")
        commands = parser.add_subparsers(dest="command", required=True)

        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--out", default=env_default("out", "."), help="출력 디렉토리")
        common.add_argument("--quiet", action="store_true", default=env_default("quiet", False, _flag_bool))
        common.add_argument("--xlsx", action="store_true", default=env_default("xlsx", False, _flag_bool),
                            help="Excel 보고서도 저장")

        solver = argparse.ArgumentParser(add_help=False)
        solver.add_argument("--restarts", type=int, default=env_default("restarts", None, int))
        solver.add_argument("--workers", type=int, default=env_default("workers", 1, int))
        solver.add_argument("--max-iterations", type=int, default=env_default("max_iterations", None, int))
        solver.add_argument("--strict", action="store_true", default=env_default("strict", False, _flag_bool),
                            help="수렴 실패를 오류(종료 코드 4)로 처리")

        solve = commands.add_parser("solve", parents=[common, solver], help="F_n(D) 곡선 계산")
        solve.add_argument("--spec", default=env_default("spec"), help="SpecFile 경로")
        solve.add_argument("--D", dest="D", type=float, nargs="+", default=env_default("D", None, _float_list))
        solve.add_argument("--mu", type=float, nargs="+", default=env_default("mu", None, _float_list),
                           help="직접 지정한 mu 목록 (D 가 없을 때)")

        synth = commands.add_parser("synth", parents=[common, solver], help="방식 합성과 폐루프 시뮬레이션")
        synth.add_argument("--spec", default=env_default("spec"))
        synth.add_argument("--D", dest="D", type=float, default=env_default("D", None, float))
        synth.add_argument("--eps", type=float, default=env_default("eps", SIMULATION_CONFIG["eps"], float))
        synth.add_argument("--gamma", type=float, default=env_default("gamma", SIMULATION_CONFIG["gamma"], float))
        synth.add_argument("--trials", type=int, default=env_default("trials", SIMULATION_CONFIG["trials"], int))
        synth.add_argument("--seed", type=int, default=env_default("seed", SIMULATION_CONFIG["seed"], int))
        synth.add_argument("--cloud-size", type=int,
                           default=env_default("cloud_size", TIMESHARE_CONFIG["cloud_size"], int))
        synth.add_argument("--truncation", type=int,
                           default=env_default("truncation", SFRL_CONFIG["truncation"], int), help="제안 개수 M")
        synth.add_argument("--trials-csv", action="store_true",
                           default=env_default("trials_csv", False, _flag_bool), help="시행별 CSV 저장")

        lqg = commands.add_parser("lqg", parents=[common], help="스칼라 LQG F(D) 곡선")
        lqg.add_argument("--a", type=float, default=env_default("a", None, float))
        lqg.add_argument("--b", type=float, default=env_default("b", None, float))
        lqg.add_argument("--q", type=float, default=env_default("q", None, float))
        lqg.add_argument("--r", type=float, default=env_default("r", None, float))
        lqg.add_argument("--sigma2", type=float, default=env_default("sigma2", None, float))
        lqg.add_argument("--D", dest="D", type=float, nargs="+", default=env_default("D", None, _float_list))

        rd = commands.add_parser("rd", parents=[common, solver], help="순차 율-왜곡 (소스 모드)")
        rd.add_argument("--spec", default=env_default("spec"))
        rd.add_argument("--p", type=float, default=env_default("p", None, float), help="Bernoulli(p) 소스")
        rd.add_argument("--n", type=int, default=env_default("n", 2, int), help="Bernoulli 소스의 지평")
        rd.add_argument("--D", dest="D", type=float, nargs="+", default=env_default("D", None, _float_list))
        rd.add_argument("--dimensions", type=int, nargs="+", default=env_default("dimensions", [1, 2, 4, 8],
                        lambda s: [int(v) for v in _float_list(s)]))
        return parser

    # ----- 공통 -----

    def _solver_options(self, args):
        overrides = {'workers': args.workers, 'strict': args.strict}
        if args.restarts is not None:
            overrides['restarts'] = args.restarts
        if args.max_iterations is not None:
            overrides['max_iterations'] = args.max_iterations
        return SolverOptions().quick(**overrides)

    def _require(self, args, *names):
        for name in names:
            if getattr(args, name) is None:
                raise SpecValidationError(f"missing required option --{name.replace('_', '-')}", key=name)

    def _path(self, args, filename):
        return os.path.join(args.out, filename)

    def _write_excel(self, args, result, trials=None):
        if not args.xlsx:
            return None
        formatted = result_collector.format_result_for_excel(result)
        if trials:
            formatted['trials'] = trials
        path = excel_generator.generate_excel(formatted, self._path(args, FILE_CONFIG["excel_filename"]))
        logger.info(f"Excel 보고서 저장: {path}")
        return path

    # ----- 명령 -----

    def cmd_solve(self, args):
        """F_n(D) 곡선 CSV (D, F_n(D), mu) 와 JSON"""
        self._require(args, "spec")
        spec = load_spec(args.spec)
        opts = self._solver_options(args)
        if args.D:
            points = [solve_fn(spec, D, opts) for D in args.D]
            rows = [(D, p.rate, p.mu) for D, p in zip(args.D, points)]
        else:
            curve = sweep_curve(spec, opts, args.mu)
            points = curve.points
            rows = curve.rows()
        result = result_collector.collect_curve(spec, rows, points, opts)
        result_collector.write_csv(self._path(args, FILE_CONFIG["curve_filename"]), ["D", "F_n(D)", "mu"],
                                   [(D, F, None if mu is None or np.isinf(mu) else mu) for D, F, mu in rows])
        result_collector.write_json(self._path(args, FILE_CONFIG["result_filename"]), result)
        self._write_excel(args, result)
        for D, F, _ in rows:
            self.stdout.write(f"{D:.6g}\t{F:.9f}\n")
        return EXIT_CODES["success"]

    def cmd_synth(self, args):
        """합성 -> 시뮬레이션 -> 검증; 원장이 통과해야 종료 코드 0"""
        self._require(args, "spec", "D")
        spec = load_spec(args.spec)
        opts = self._solver_options(args)
        bundle = synthesize(spec, args.D, args.eps, args.gamma, args.seed, opts,
                            cloud_size=args.cloud_size, M=args.truncation)
        report = run_trials(bundle, args.trials, args.seed, workers=args.workers)
        ledger = verify_sandwich(report)
        result = result_collector.collect_synthesis(bundle, report, ledger)
        result_collector.write_json(self._path(args, FILE_CONFIG["result_filename"]), result)
        if args.trials_csv:
            report.write_csv(self._path(args, FILE_CONFIG["trials_filename"]))
        self._write_excel(args, result, report.rows)
        self.stdout.write(f"F_n(D)={bundle.F:.9f} rate={report.exact_rate:.9f} cost={report.exact_cost:.9f} "
                          f"bound={report.bound:.9f} ledger={'PASS' if ledger.passed else 'FAIL'}\n")
        return EXIT_CODES["success"] if ledger.passed else EXIT_CODES["verification_failure"]

    def cmd_lqg(self, args):
        """스칼라 LQG 곡선 CSV (# s, # m, # D_min 주석 후 D, F(D))"""
        self._require(args, "a", "b", "q", "r", "sigma2")
        spec = ScalarLqgSpec(args.a, args.b, args.sigma2, args.q, args.r)
        derived = riccati_solve(spec)
        grid = args.D if args.D else default_grid(derived)
        rows = f_curve(spec, derived, grid)
        result = result_collector.collect_lqg(spec, derived, rows)
        comments = [f"s={derived.s!r}", f"m={derived.m!r}", f"D_min={derived.D_min!r}"]
        result_collector.write_csv(self._path(args, FILE_CONFIG["lqg_filename"]), ["D", "F(D)"],
                                   [(D, F) for D, F in rows], comments)
        result_collector.write_json(self._path(args, FILE_CONFIG["result_filename"]), result)
        self._write_excel(args, result)
        for D, F in rows:
            self.stdout.write(f"{D:.6g}\t{F:.9f}\n")
        return EXIT_CODES["success"]

    def _rd_spec(self, args):
        if args.spec:
            spec = load_spec(args.spec)
            if not spec.source_mode:
                raise SpecValidationError("rd needs a source-mode spec (\"mode\": \"source\")", key="mode")
            return spec
        if args.p is None or not validate_probability(args.p):
            raise SpecValidationError("rd needs --spec or a Bernoulli parameter --p in [0, 1]", key="p")
        return SystemSpec.iid_source(args.n, [1.0 - args.p, args.p], [[0.0, 1.0], [1.0, 0.0]],
                                     name=f"bernoulli-{args.p:g}")

    def cmd_rd(self, args):
        """순차 율-왜곡: F_n(D), 단일 문자 R(D), 상한, 차원별 오버헤드 표"""
        self._require(args, "D")
        spec = self._rd_spec(args)
        opts = self._solver_options(args)
        marginal = spec.kernel_stage(1)
        rows = []
        for D in args.D:
            point = solve_fn(spec, D, opts)
            reference = rate_distortion(marginal, spec.cost, D)
            rows.append({
                'D': D,
                'F_n': point.rate,
                'reference': reference,
                'upper': achievability_bound(point.rate, spec.horizon),
                'gap_shrinkage': gap_shrinkage_table(point.rate, spec.horizon, args.dimensions)
            })
        result = result_collector.collect_rd(spec, rows, spec.horizon)
        result_collector.write_csv(self._path(args, FILE_CONFIG["rd_filename"]), ["D", "F_n(D)", "R(D)", "upper"],
                                   [(r['D'], r['F_n'], r['reference'], r['upper']) for r in rows])
        result_collector.write_json(self._path(args, FILE_CONFIG["result_filename"]), result)
        self._write_excel(args, result)
        for row in rows:
            overheads = " ".join(f"k={g['k']}:{g['overhead']:.6f}" for g in row['gap_shrinkage'])
            self.stdout.write(f"{row['D']:.6g}\t{row['F_n']:.9f}\t{row['reference']:.9f}\t{overheads}\n")
        return EXIT_CODES["success"]

    # ----- 실행 -----

    def run(self, argv=None):
        """
        명령 실행

        Returns:
            int: 종료 코드 (0 성공, 2 명세 오류, 3 비용 불가능, 4 미수렴, 5 검증 실패)
        """
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_CODES["success"] if e.code == 0 else EXIT_CODES["spec_error"]
        previous_level = logger.level
        if args.quiet:
            logger.set_level("ERROR")
        handler = getattr(self, f"cmd_{args.command}")
        started = time.perf_counter()
        try:
            code = handler(args)
        except RateCostError as e:
            self.stderr.write(f"{APP_CONFIG['name']}: error: {e}\n")
            return e.exit_code
        finally:
            logger.set_level(previous_level)
        logger.debug(f"{args.command} 완료 ({time.perf_counter() - started:.2f}s)")
        return code

"""
율-비용(rate-cost) 툴킷 설정 파일
"""

# 애플리케이션 기본 설정
APP_CONFIG = {
    "name": "ratecost",
    "title": "Rate-cost toolkit v1.0",
    "version": "1.0.0",
    "schema_version": 1
}

# 시스템 모델 설정
MODEL_CONFIG = {
    "trajectory_budget": 10 ** 7,     # |X|^n * |U|^n 상한
    "row_tolerance": 1e-12,           # SystemSpec / CausalPolicy 행 합 허용 오차
    "mass_tolerance": 1e-10,          # JointLaw 전체 질량 허용 오차
    "file_accept_tolerance": 1e-9,    # 명세 파일: 그대로 허용
    "file_renormalize_tolerance": 1e-6  # 명세 파일: 경고 후 재정규화
}

# F_n(D) 솔버 설정
SOLVER_CONFIG = {
    "mu_exponents": (-10, 10),        # mu in {0} U {2^k}
    "cost_tolerance": 1e-4,           # 이분법으로 D를 맞추는 허용 오차
    "max_bisections": 40,
    "max_mu_exponent": 30,            # 격자 끝에서 비용이 D를 넘으면 2^30까지 확장
    "step_size": 1.0,                 # 1.0이면 다단계 Blahut-Arimoto 갱신과 동일
    "max_iterations": 3000,
    "tolerance": 1e-11,               # 목적함수 상대 변화량
    "gap_tolerance": 1e-7,            # 쌍대 간격 (비트/단계)
    "restarts": 8,
    "restart_seed": 20240611,
    "workers": 1,
    "brute_force_max_params": 12,
    "brute_force_max_grid": 5 * 10 ** 6,
    "brute_force_batch": 32768
}

# SFRL 엔진 설정
SFRL_CONFIG = {
    "truncation": 1024,               # 문맥당 제안 개수 M
    "fidelity_tv": 0.01,
    "max_failure_fraction": 0.05
}

# 시분할(time-sharing) 축약 설정
TIMESHARE_CONFIG = {
    "cloud_size": 200,
    "initial_delta": 0.1,
    "min_delta": 1e-12,
    "se_multiplier": 2.0,
    "max_cloud_growth": 3,            # 무게중심이 D + 2 SE 를 넘으면 N 개씩 추가, 최대 3N
    "tie_tolerance": 1e-12
}

# 폐루프 시뮬레이션 설정
SIMULATION_CONFIG = {
    "eps": 0.05,
    "gamma": 0.25,
    "trials": 10000,
    "seed": 7,
    "report_se_multiplier": 3.0,
    "converse_tolerance": 1e-3,
    "cost_tolerance": 1e-9,
    # 이름 붙은 시드 스트림 (SeedSequence spawn_key 첫 항목)
    "seed_streams": {
        "dynamics": 0,
        "tables": 1,
        "q": 2
    }
}

# 기본 파일 설정
FILE_CONFIG = {
    "result_filename": "result.json",
    "curve_filename": "curve.csv",
    "trials_filename": "trials.csv",
    "lqg_filename": "lqg_curve.csv",
    "rd_filename": "rd_curve.csv",
    "excel_filename": "report.xlsx",
    "encoding": "utf-8"
}

# 환경 변수 접두어 (모든 CLI 플래그에 대응)
ENV_PREFIX = "RATECOST_"

# 종료 코드 (고정 계약)
EXIT_CODES = {
    "success": 0,
    "spec_error": 2,
    "infeasible": 3,
    "non_convergence": 4,
    "verification_failure": 5
}

# 에러 메시지
ERROR_MESSAGES = {
    "dimension_mismatch": "Alphabet sizes of policy and system do not match",
    "row_not_normalized": "Probability row does not sum to 1",
    "negative_cost": "Cost entries must be nonnegative and finite",
    "budget_exceeded": "Trajectory table exceeds the configured budget",
    "infeasible": "Cost level is below the minimal achievable cost",
    "too_large": "Instance is too large for exhaustive search",
    "truncation": "All selection weights are infinite (truncation failure)",
    "malformed_prefix": "Bit string does not start with a valid codeword",
    "unknown_symbol": "Symbol has no codeword in this context",
    "lqg_domain": "D must exceed D_min"
}

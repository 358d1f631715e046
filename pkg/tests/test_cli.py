import io
import json

import pytest
from openpyxl import load_workbook

from cli import RateCostApp

from conftest import spec_path


def run(*argv):
    app = RateCostApp(stdout=io.StringIO(), stderr=io.StringIO())
    code = app.run([str(v) for v in argv])
    return code, app.stdout.getvalue(), app.stderr.getvalue()


def test_lqg_curve_file(tmp_path):
    code, out, _ = run("lqg", "--a", 2, "--b", 1, "--q", 1, "--r", 0, "--sigma2", 1, "--D", 2, 3,
                       "--out", tmp_path)
    assert code == 0
    lines = (tmp_path / "lqg_curve.csv").read_text(encoding="utf-8").splitlines()
    assert lines[:4] == ["# s=1.0", "# m=1.0", "# D_min=1.0", "D,F(D)"]
    assert lines[4] == "2.0,1.5"
    assert len(lines) == 6
    result = json.loads((tmp_path / "result.json").read_text(encoding="utf-8"))
    assert result['command'] == "lqg"
    assert result['derived']['D_min'] == 1.0
    assert out.splitlines()[0] == "2\t1.500000000"


def test_lqg_below_minimal_cost(tmp_path):
    code, _, err = run("lqg", "--a", 2, "--b", 1, "--q", 1, "--r", 0, "--sigma2", 1, "--D", 0.5,
                       "--out", tmp_path)
    assert code == 2
    assert "D_min=1" in err


def test_missing_option_reports_flag(tmp_path):
    code, _, err = run("lqg", "--a", 2, "--out", tmp_path)
    assert code == 2
    assert "[b]" in err


def test_unknown_command_is_spec_error():
    code, _, _ = run("frobnicate")
    assert code == 2


def test_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"horizon": 2,', encoding="utf-8")
    code, _, err = run("solve", "--spec", path, "--D", 0.3, "--out", tmp_path)
    assert code == 2
    assert str(path) in err
    assert "invalid JSON" in err


def test_missing_key_names_it(tmp_path):
    document = json.loads(open(spec_path("flip_n2"), encoding="utf-8").read())
    del document['cost']
    path = tmp_path / "no_cost.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    code, _, err = run("solve", "--spec", path, "--D", 0.3, "--out", tmp_path)
    assert code == 2
    assert "[cost]" in err


def test_infeasible_cost_exit_code(tmp_path):
    code, _, err = run("solve", "--spec", spec_path("flip_n2"), "--D", 0.1, "--restarts", 1, "--out", tmp_path)
    assert code == 3
    assert "infeasible" in err


def test_solve_writes_curve_and_result(tmp_path):
    code, out, _ = run("solve", "--spec", spec_path("flip_n2"), "--D", 0.3, 0.5, "--restarts", 1,
                       "--out", tmp_path, "--xlsx")
    assert code == 0
    lines = (tmp_path / "curve.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "D,F_n(D),mu"
    assert len(lines) == 3
    result = json.loads((tmp_path / "result.json").read_text(encoding="utf-8"))
    assert [row['D'] for row in result['curve']] == [0.3, 0.5]
    assert result['curve'][1]['F_n'] == 0.0
    assert 0.0 < result['curve'][0]['F_n'] < 1.0
    assert len(out.splitlines()) == 2
    workbook = load_workbook(tmp_path / "report.xlsx")
    assert {"요약", "곡선"} <= set(workbook.sheetnames)


def test_synthesis_is_reproducible(tmp_path):
    outputs = []
    for name in ("first", "second"):
        out_dir = tmp_path / name
        out_dir.mkdir()
        code, _, _ = run("synth", "--spec", spec_path("flip_n2"), "--D", 0.3, "--trials", 400, "--seed", 7,
                         "--cloud-size", 60, "--truncation", 256, "--restarts", 1, "--trials-csv",
                         "--out", out_dir)
        outputs.append((code, (out_dir / "result.json").read_bytes(), (out_dir / "trials.csv").read_bytes()))
    assert outputs[0] == outputs[1]
    assert outputs[0][0] == 0
    result = json.loads(outputs[0][1])
    assert result['command'] == "synth"
    assert result['scheme']['seeds']['seed'] == 7
    assert result['ledger']['passed']
    assert {'scheme', 'simulation', 'ledger'} <= set(result)


def test_rate_distortion_for_bernoulli_source(tmp_path):
    code, out, _ = run("rd", "--p", 0.2, "--D", 0.1, "--restarts", 1, "--out", tmp_path)
    assert code == 0
    result = json.loads((tmp_path / "result.json").read_text(encoding="utf-8"))
    row = result['rows'][0]
    assert row['F_n'] == pytest.approx(row['reference'], abs=2e-3)
    assert row['upper'] > row['F_n']
    assert [g['k'] for g in row['gap_shrinkage']] == [1, 2, 4, 8]
    assert "k=8:" in out


def test_rd_requires_source(tmp_path):
    code, _, err = run("rd", "--spec", spec_path("flip_n2"), "--D", 0.1, "--out", tmp_path)
    assert code == 2
    assert "[mode]" in err


def test_environment_supplies_defaults(tmp_path, monkeypatch):
    for flag, value in {"A": "2", "B": "1", "Q": "1", "R": "0", "SIGMA2": "1", "D": "2,4"}.items():
        monkeypatch.setenv(f"RATECOST_{flag}", value)
    monkeypatch.setenv("RATECOST_OUT", str(tmp_path))
    code, out, _ = run("lqg", "--D", 3)
    assert code == 0
    assert out.splitlines() == ["3\t1.292481250"]
    code, out, _ = run("lqg")
    assert code == 0
    assert len(out.splitlines()) == 2


@pytest.mark.slow
@pytest.mark.parametrize("name", ["flip_n3", "flip_n4"])
def test_strict_default_synthesis_passes(tmp_path, name):
    code, _, err = run("synth", "--spec", spec_path(name), "--D", 0.255333, "--trials", 2000, "--strict",
                       "--out", tmp_path)
    assert code == 0, err
    result = json.loads((tmp_path / "result.json").read_text(encoding="utf-8"))
    assert result['ledger']['passed']
    assert result['scheme']['policy']['converged']

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from cren_monogamy.cli import RunConfig, fixture_table, main, oracle_check, parse_cut, random_suite, sweep_w
from cren_monogamy.errors import DomainError
from cren_monogamy.states import bell, save_state

TOL = 1e-9


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_measure_example3(capsys):
    code, out, _ = run(capsys, "measure", "--fixture", "example3", "--cut", "AB|CD")
    data = json.loads(out)
    assert code == 0
    assert data["negativity"] == pytest.approx(2.0, abs=TOL)
    assert data["schmidt_rank"] == 3
    assert len(data["pairs"]) == 6


def test_measure_example4(capsys):
    _, out, _ = run(capsys, "measure", "--fixture", "example4", "--cut", "0,1|2,3")
    assert json.loads(out)["negativity"] == pytest.approx(1.0, abs=TOL)


def test_measure_state_file(capsys, tmp_path):
    path = tmp_path / "bell.json"
    save_state(bell(), path)
    code, out, _ = run(capsys, "measure", "--state", str(path), "--cut", "0|1")
    data = json.loads(out)
    assert code == 0 and data["concurrence"] == pytest.approx(1.0, abs=TOL)
    assert data["pairs"][0]["coa"] == pytest.approx(1.0, abs=TOL)


def test_measure_csv(capsys):
    code, out, _ = run(capsys, "measure", "--fixture", "bell", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["scope", "pair", "quantity", "value"]
    assert "\r" not in out
    c = next(r for r in rows if r[2] == "concurrence")
    assert float(c[3]) == pytest.approx(1.0)


@pytest.mark.parametrize("argv", [
    ["measure", "--fixture", "example3", "--cut", "AB|CE"],
    ["measure", "--fixture", "example3", "--cut", "0,1"],
    ["measure", "--state", "/nonexistent/state.json"],
    ["measure"],
    ["bounds", "--fixture", "example3", "--roles", "A=0,B=0,C=1,2"],
    ["sweep-w", "--rest-weight", "1.5"],
    ["random-suite", "--trials", "0"],
    ["random-suite", "--tol", "0", "--trials", "1"],
    ["oracle-check", "--trials", "0"],
])
def test_bad_input_exits_nonzero(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_parse_cut():
    assert str(parse_cut("AB|CD", 4)) == "0,1|2,3"
    assert str(parse_cut("2|0,1", 3)) == "2|0,1"
    with pytest.raises(DomainError):
        parse_cut("A|B|C", 3)


def test_bounds_example3(capsys):
    code, out, err = run(capsys, "bounds", "--fixture", "example3", "--roles", "A=0,B=1,C=2,3")
    data = json.loads(out)
    thm2 = data["reports"]["thm2_upper"]["bounds"][0]
    assert code == 0 and data["satisfied"]
    assert thm2["value"] == pytest.approx(32 / 3, abs=TOL) and thm2["satisfied"]
    assert "cor1_upper" not in data["reports"]
    assert "tian_upper" in err


def test_bounds_example4(capsys):
    code, out, err = run(capsys, "bounds", "--fixture", "example4")
    data = json.loads(out)
    assert code == 0
    assert data["reports"]["thm1_lower"]["bounds"][0]["value"] == pytest.approx(0.0, abs=TOL)
    assert data["cited_bounds"]["tian_lower"]["bounds"][0]["value"] == pytest.approx(2.0, abs=TOL)
    assert any(n.startswith("tian_lower") for n in data["notes"]) and "tian_lower" in err


def test_bounds_uniform_w4(capsys):
    _, out, _ = run(capsys, "bounds", "--fixture", "example2", "--format", "csv")
    reports = {r["report"] for r in csv.DictReader(io.StringIO(out))}
    assert {"thm3_lower", "thm4_upper", "cor1_upper"} <= reports


def test_sweep_default():
    rows = sweep_w()
    assert len(rows) == 101
    assert all(r["thm1_lower"] - TOL <= r["quantity"] <= r["cor1_upper"] + TOL for r in rows)
    first, last = rows[0], rows[-1]
    assert first["a2_sq"] == 0 and last["a2_sq"] == pytest.approx(1 / 3)
    assert [first[k] for k in ("thm1_lower", "quantity", "cor1_upper")] == pytest.approx([8 / 9] * 3, abs=TOL)
    assert [last[k] for k in ("thm1_lower", "quantity", "cor1_upper")] == pytest.approx([0, 8 / 9, 16 / 9], abs=TOL)


def test_sweep_cli_csv(capsys):
    code, out, _ = run(capsys, "sweep-w", "--steps", "10")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["a2_sq", "quantity", "thm1_lower", "cor1_upper"]
    assert len(rows) == 12
    # 17 significant digits survive the round trip
    assert [float(x) for x in rows[-1]] == [sweep_w(steps=10)[-1][k] for k in rows[0]]


def test_sweep_other_sizes():
    rows = sweep_w(n=5, steps=20)
    assert len(rows) == 21 and all(r["satisfied"] for r in rows)


def test_random_suite_small():
    summary = random_suite(RunConfig(seed=7, trials=5), [3, 4])
    assert summary["failures"] == 0
    assert "thm3_lower.thm3_bound1" in summary["sizes"]["4"]["checks"]
    assert "thm3_lower.thm3_bound1" not in summary["sizes"]["3"]["checks"]
    checks = summary["sizes"]["3"]["checks"]
    assert checks["thm1_lower.thm1"]["pass"] == 5
    assert checks["cren_sandwich.cren_sum"]["pass"] == 15


def test_random_suite_rejects_small_size():
    with pytest.raises(DomainError):
        random_suite(RunConfig(trials=1), [2])


def test_output_files_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["random-suite", "--trials", "3", "--seed", "7", "--n-qubits", "3,4", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    csvs = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in csvs:
        main(["sweep-w", "--out", str(p)])
    assert csvs[0].read_bytes() == csvs[1].read_bytes()
    assert capsys.readouterr().out == ""


def test_fixtures_table(capsys):
    rows = {r["name"]: r for r in fixture_table()}
    assert rows["example3.thm2_upper"]["expected"] == pytest.approx(32 / 3)
    assert rows["example3.crenoa_AC"]["expected"] == pytest.approx(2 * math.sqrt(2) / 3)
    assert rows["example4.tian_rhs"]["verdict"] == "violates N^2=1"
    assert all(r["ok"] for r in rows.values())
    code, out, _ = run(capsys, "fixtures", "--format", "csv")
    assert code == 0 and out.startswith("name,expected,computed,delta,verdict\n")


def test_oracle_check_small(capsys):
    summary = oracle_check(RunConfig(seed=3, trials=5), 50)
    assert summary["violations"] == []
    assert summary["min_margin_cren"] >= -TOL and summary["min_margin_crenoa"] >= -TOL
    code, out, _ = run(capsys, "oracle-check", "--trials", "3", "--samples", "20")
    assert code == 0 and json.loads(out)["states"] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cren_monogamy", "measure", "--fixture", "ghz"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["negativity"] == pytest.approx(1.0)

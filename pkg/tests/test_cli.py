import json
import subprocess
import sys
from pathlib import Path

import pytest

from nevpick import jsonio
from nevpick.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, json.loads(out.out) if out.out.strip() else None, out.err


class TestExitCodes:
    def test_validate_ok(self, capsys):
        code, doc, err = run(capsys, "validate", DATA / "d1.json")
        assert code == 0 and doc["verdict"] is True and "admissible" in err

    def test_pick_indefinite(self, capsys):
        code, doc, _ = run(capsys, "pick", DATA / "d3.json")
        assert code == 1 and doc["kappa"] == 1 and doc["verdict"] == "indefinite"

    def test_pick_d4_rho1(self, capsys):
        code, doc, _ = run(capsys, "pick", DATA / "d4_rho1.json")
        assert code == 1 and doc["inertia"]["n_minus"] == 1

    def test_pick_simple_file(self, capsys):
        code, doc, _ = run(capsys, "pick", DATA / "d1_simple.json")
        assert code == 0 and doc["kappa"] == 0

    def test_solve_eval(self, capsys):
        code, doc, err = run(capsys, "solve", DATA / "d3.json", "--eval", "1", "2")
        assert code == 0 and doc["kappa_expected"] == 1
        vals = [jsonio.decode_matrix(v["S"], "S")[0, 0] for v in doc["values"]]
        assert vals[0] == pytest.approx(2) and vals[1] == pytest.approx(-4)
        assert "S(" in err

    def test_solve_with_g_file(self, capsys):
        code, doc, _ = run(capsys, "solve", DATA / "d1.json", "--g-file", DATA / "g_half.json", "--eval", "3")
        assert code == 0
        assert jsonio.decode_matrix(doc["values"][0]["S"], "S")[0, 0] == pytest.approx(0.25)

    def test_solve_degenerate(self, tmp_path, capsys):
        bad = jsonio.dumps({"kind": "simple", "p": 1, "m": 1,
                            "left": [{"z": [1, 0], "x": [[1, 0]], "y": [[0.5, 0]]}],
                            "right": [{"w": [1, 0], "u": [[1, 0]], "v": [[0.5, 0]]}],
                            "rho": [{"i": 0, "j": 0, "value": [0.375, 0]}]})
        path = tmp_path / "degenerate.json"
        path.write_text(bad)
        code, doc, _ = run(capsys, "solve", path)
        assert code == 1 and "singular" in doc["error"]

    def test_verify_ok(self, capsys):
        code, doc, _ = run(capsys, "verify", DATA / "d1.json")
        assert code == 0 and doc["mode"] == "schur"

    def test_verify_non_solution(self, capsys):
        code, doc, _ = run(capsys, "verify", DATA / "d1.json", "--s-file", DATA / "s_one.json")
        assert code == 1 and doc["r_left"] == pytest.approx(1)

    def test_verify_kappa(self, capsys):
        code, doc, _ = run(capsys, "verify", DATA / "d3.json", "--kappa", "1")
        assert code == 0 and doc["interior_max"] is None

    def test_kappa(self, capsys):
        code, doc, _ = run(capsys, "kappa", DATA / "d3.json")
        assert code == 0 and doc["certified"] and doc["pole_count_S"] == 1

    def test_kappa_side_condition(self, capsys):
        code, doc, _ = run(capsys, "kappa", DATA / "d3.json", "--g-file", DATA / "g_half.json")
        assert code == 1 and not doc["side_condition_ok"]

    def test_demo(self, capsys):
        code, doc, err = run(capsys, "demo", "--json")
        assert code == 0 and [r["fixture"] for r in doc["fixtures"]] == ["D1", "D2", "D3", "D4"]
        assert err == ""

    def test_missing_file(self, capsys):
        code, doc, _ = run(capsys, "validate", DATA / "nope.json")
        assert code == 2 and doc["kind"] == "input"

    def test_malformed(self, tmp_path, capsys):
        f = tmp_path / "bad.json"
        f.write_text('{"kind":"btoa","Z":[[1]]}')
        code, doc, _ = run(capsys, "pick", f)
        assert code == 2

    def test_usage_error(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_out_file(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code, doc, _ = run(capsys, "pick", DATA / "d1.json", "--out", out, "--json")
        assert code == 0 and doc is None
        assert json.loads(out.read_text())["exit_code"] == 0

    def test_bad_eval_point(self, capsys):
        code, _, _ = run(capsys, "solve", DATA / "d1.json", "--eval", "abc")
        assert code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "nevpick", "pick", str(DATA / "d2.json"), "--json"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["kappa"] == 0

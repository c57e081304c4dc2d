import csv
import io
import json
import subprocess
import sys

import pytest

from harmcrit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


class TestInvariants:
    def test_pm_cusp(self, capsys):
        code, r = run_json(capsys, "invariants", "pm: p = z + (0,1)*z^2; m = 1")
        assert code == 0
        assert (r["m"], r["mu"], r["j"], r["order_pair"]) == (1, 3, 2, [2, 3])
        assert r["model"] == {"shape": "cusp", "candidates": [[3, 1], [1, 3]], "degree_abs": 1,
                              "fibers": [3, 1], "unique": False}

    def test_generic_order_pair(self, capsys):
        _, r = run_json(capsys, "invariants", "pm: p = z + z^2; m = 1")
        assert r["order_pair"] == [1, "inf"] and r["model"]["unique"] is True

    def test_analytic_fold(self, capsys):
        code, r = run_json(capsys, "invariants", "f1 = x; f2 = y^2")
        assert code == 0 and (r["j"], r["mu"], r["class"]) == (1, 2, "fold")

    def test_analytic_collapse(self, capsys):
        _, r = run_json(capsys, "invariants", "f1 = x; f2 = x*y")
        assert r["mu"] == "inf" and r["class"] == "collapse"

    def test_truncation_flag(self, capsys):
        spec = "pm: p = " + " ".join(["-z"] + [f"- z^{k}" for k in range(2, 33)]) + " + O(z^33); m = 1"
        _, r = run_json(capsys, "invariants", spec, "--trunc", "32")
        assert r["mu"] == ">=33"

    def test_non_light_rejected(self, capsys):
        code, _, err = run(capsys, "invariants", "p = z; q = z")
        assert code == 2 and "jacobian identically zero (non-light)" in err

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "invariants", "pm: p = z + ; m = 1")
        assert code == 1 and "column" in err

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO("pm: p = z + z^2; m = 2\n"))
        _, r = run_json(capsys, "invariants", "-")
        assert r["mu"] == 7

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "invariants", "f1 = x; f2 = x*y + y^3")
        assert code == 0 and "class: cusp" in out

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "r.json"
        run(capsys, "invariants", "f1 = x; f2 = y^2", "--json", "--out", str(path))
        assert json.loads(path.read_text())["mu"] == 2

    def test_bad_trunc_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["invariants", "f1 = x; f2 = y^2", "--trunc", "4"])
        assert exc.value.code == 1


class TestConstruct:
    def test_p5(self, capsys):
        code, r = run_json(capsys, "construct", "1", "5")
        assert code == 0 and r["agrees"]
        assert r["germ"] == "pm: p = z + (0, 1)*z^2 - z^3 + (0, -1)*z^4 + 2*z^5; m = 1"
        assert (r["report"]["mu"], r["report"]["j"]) == (5, 4)

    def test_generic_m2(self, capsys):
        _, r = run_json(capsys, "construct", "2", "6")
        assert (r["report"]["mu"], r["report"]["j"]) == (6, 2)

    def test_infinite(self, capsys):
        code, r = run_json(capsys, "construct", "1", "inf", "--trunc", "16")
        assert code == 0 and r["report"]["mu"] == ">=17"

    def test_infeasible(self, capsys):
        code, _, err = run(capsys, "construct", "2", "5")
        assert code == 2 and "m^2 + m" in err

    def test_output_feeds_invariants(self, capsys):
        _, r = run_json(capsys, "construct", "2", "9")
        _, again = run_json(capsys, "invariants", r["germ"])
        assert (again["mu"], again["j"]) == (9, 5)


class TestCurve:
    def test_harmonic_csv(self, capsys):
        code, out, _ = run(capsys, "curve", "pm: p = z + z^2; m = 1", "--t-min", "-0.5", "--t-max", "0.5")
        assert code == 0
        rows = [r for r in csv.reader(io.StringIO(out)) if r and not r[0].startswith("#")]
        assert rows[0] == ["t", "re_gamma", "im_gamma", "re_beta", "im_beta", "R", "kappa"]
        body = rows[1:]
        assert len(body) == 101
        assert all(float(r[6]) > 0 for r in body if float(r[0]) != 0)
        assert "# j_hat=1 " in out

    def test_single_row(self, capsys):
        _, out, _ = run(capsys, "curve", "pm: p = z + z^2; m = 1", "--samples", "1")
        rows = [r for r in out.splitlines() if r and not r.startswith("#")]
        assert len(rows) == 2

    def test_analytic_csv(self, capsys):
        code, out, _ = run(capsys, "curve", "f1 = x; f2 = y^2", "--t-max", "0.1", "--samples", "50")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "t,gamma_x,gamma_y,re_sigma,im_sigma"
        assert len([x for x in lines[1:] if not x.startswith("#")]) == 50
        d1 = next(x for x in lines if x.startswith("# sigma_d1="))
        assert abs(float(d1.split("=")[1].split(",")[0]) + 2) < 1e-6

    def test_rejected_germ(self, capsys):
        code, _, _ = run(capsys, "curve", "p = z^2; q = z")
        assert code == 2


class TestVerify:
    def test_default_run_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--seed", "42", "--cases", "100")
        assert code == 0 and "result: all properties pass" in out and "FAIL" not in out

    def test_zero_cases(self, capsys):
        code, out, _ = run(capsys, "verify", "--cases", "0")
        assert code == 0 and "all properties pass" in out

    def test_deterministic(self, capsys):
        first = run(capsys, "verify", "--seed", "7", "--cases", "8")[1]
        second = run(capsys, "verify", "--seed", "7", "--cases", "8")[1]
        assert first == second

    def test_negative_cases(self, capsys):
        assert run(capsys, "verify", "--cases", "-1")[0] == 1


def test_demo(capsys):
    code, out, _ = run(capsys, "demo")
    assert code == 0 and "FAIL" not in out and out.strip().endswith("all fixtures reproduced")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "harmcrit", "invariants", "pm: p = z + z^2; m = 1", "--json"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["mu"] == 2

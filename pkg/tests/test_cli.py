import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from gfunc.cli import main
from gfunc.sweep import read_csv

DATA = Path(__file__).parent / "data"
# gfunc.oracle.oracle_g(1, 1.5 - 2.598j)
EVAL_GOLDEN = complex(-0.03840228994278848, 0.04910532315636331)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestEval:
    def test_origin(self, capsys):
        code, out, _ = run(capsys, "eval", "--m", "1", "--re", "0", "--im", "0")
        re, im, err = out.split()
        assert code == 0
        assert float(re) == pytest.approx(0.5, abs=1e-10)
        assert im == "0"
        assert 0 <= float(err) < 1e-10

    def test_negative_real_part(self, capsys):
        code, out, err = run(capsys, "eval", "--m", "0", "--re", "-1", "--im", "0")
        assert code == 2 and out == "" and "Re z" in err

    def test_oracle_point(self, capsys):
        code, out, _ = run(capsys, "eval", "--m", "1", "--re", "1.5", "--im", "-2.598")
        re, im, _ = map(float, out.split())
        assert code == 0
        assert abs(complex(re, im) - EVAL_GOLDEN) <= 1e-10

    def test_json(self, capsys):
        code, out, _ = run(capsys, "eval", "--m", "5", "--re", "0", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["re"] == pytest.approx(1.0, abs=1e-10) and doc["im"] == 0

    def test_convergence_failure(self, capsys):
        code, _, err = run(capsys, "eval", "--m", "1", "--re", "1", "--im", "-3", "--tol", "1e-17")
        assert code == 3 and "convergence" in err

    def test_env_tolerance_and_flag_override(self, capsys, monkeypatch):
        monkeypatch.setenv("GFN_TOL", "1e-17")
        assert run(capsys, "eval", "--m", "1", "--re", "1", "--im", "-3")[0] == 3
        assert run(capsys, "eval", "--m", "1", "--re", "1", "--im", "-3", "--tol", "1e-10")[0] == 0

    @pytest.mark.parametrize("value", ["nan", "inf", "abc"])
    def test_non_numeric(self, capsys, value):
        with pytest.raises(SystemExit) as exc:
            main(["eval", "--m", "1", "--re", value])
        assert exc.value.code == 2


class TestSweeps:
    def test_fig1_golden(self, capsys, tmp_path):
        out = tmp_path / "fig1.csv"
        code, stdout, _ = run(capsys, "sweep-r", "--m", "1", "--theta", "1.0471975511965976",
                              "--lo", "0", "--hi", "8", "--steps", "400", "--out", str(out))
        assert code == 0 and stdout.split() == [str(out), "400"]
        assert out.read_bytes() == (DATA / "fig1_radial.csv").read_bytes()

    def test_fig2_golden(self, capsys, tmp_path):
        out = tmp_path / "fig2.csv"
        code, _, _ = run(capsys, "sweep-theta", "--m", "1", "--r", "3", "--lo", "0",
                         "--hi", "1.5707963267948966", "--steps", "200", "--out", str(out),
                         "--workers", "4")
        assert code == 0
        assert out.read_bytes() == (DATA / "fig2_phase.csv").read_bytes()

    def test_config_file_with_flag_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("m = 1\ntheta = 1.0471975511965976\nlo = 0\nhi = 8\nsteps = 400\n")
        out = tmp_path / "short.csv"
        code, _, _ = run(capsys, "sweep-r", "--config", str(cfg), "--steps", "5", "--out", str(out))
        assert code == 0
        assert [r.abscissa for r in read_csv(out)] == [0.0, 2.0, 4.0, 6.0, 8.0]

    def test_unknown_config_key(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("m = 1\nfoo = 2\n")
        code, _, err = run(capsys, "sweep-r", "--config", str(cfg), "--out", str(tmp_path / "x.csv"))
        assert code == 2 and ":2: unknown key 'foo'" in err

    def test_too_few_steps(self, capsys, tmp_path):
        code, _, _ = run(capsys, "sweep-r", "--m", "1", "--theta", "1", "--lo", "0", "--hi", "1",
                         "--steps", "1", "--out", str(tmp_path / "x.csv"))
        assert code == 2

    def test_unwritable_output(self, capsys, tmp_path):
        code, _, err = run(capsys, "sweep-r", "--m", "1", "--theta", "1", "--lo", "0", "--hi", "1",
                           "--steps", "3", "--out", str(tmp_path / "no" / "x.csv"))
        assert code == 4 and "I/O" in err

    def test_json_output(self, capsys, tmp_path):
        out = tmp_path / "s.json"
        code, _, _ = run(capsys, "sweep-theta", "--m", "1", "--r", "3", "--lo", "0", "--hi", "1",
                         "--steps", "3", "--out", str(out))
        assert code == 0 and len(json.loads(out.read_text())) == 3


class TestChi:
    ARGS = ("chi", "--i1", "1", "--i3", "1", "--beta", "1", "--tau", "1",
            "--omega-lo", "0", "--omega-hi", "2000", "--steps", "3")

    def test_spectrum(self, capsys, tmp_path):
        out = tmp_path / "chi.csv"
        code, _, _ = run(capsys, *self.ARGS, "--out", str(out))
        rec = read_csv(out)
        assert code == 0
        assert rec[0].abscissa == 0.0 and abs(rec[0].im) <= 1e-9
        assert abs(complex(rec[-1].re, rec[-1].im)) < 0.1

    def test_zero_tau(self, capsys, tmp_path):
        args = list(self.ARGS)
        args[args.index("--tau") + 1] = "0"
        code, _, err = run(capsys, *args, "--out", str(tmp_path / "c.csv"))
        assert code == 2 and "tau" in err


class TestSelftest:
    def test_passes_and_is_deterministic(self, capsys):
        first = run(capsys, "selftest")
        second = run(capsys, "selftest")
        assert first[0] == 0
        assert first[1] == second[1]
        assert first[1].rstrip().endswith("selftest: all identities hold")
        assert "FAIL" not in first[1]

    def test_tight_tolerance_fails(self, capsys, monkeypatch):
        monkeypatch.setenv("GFN_TOL", "1e-15")
        code, out, _ = run(capsys, "selftest")
        assert code == 1
        assert "FAIL" in out and "failed at" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gfunc", "eval", "--m", "3", "--re", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert float(proc.stdout.split()[0]) == pytest.approx(0.5, abs=1e-10)


def test_usage_error_exit_code():
    proc = subprocess.run([sys.executable, "-m", "gfunc", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == ""


def test_pi_flag_value_is_locale_free(capsys):
    code, out, _ = run(capsys, "eval", "--m", "1", "--re", repr(math.pi))
    assert code == 0 and "," not in out

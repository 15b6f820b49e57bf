import io
import subprocess
import sys

import pytest

from household_alloc.cli import main
from household_alloc.model import solve_closed_form


def run(argv, **kw):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out=out, err=err, **kw)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def cfg(config_dir):
    return lambda name: str(config_dir / name)


@pytest.fixture
def write_cfg(tmp_path):
    def _write(text, name="c.cfg"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


BASE = "\n".join(f"gamma{i} = 1" for i in range(1, 8)) + "\nw = 1\ntau = 0.1\n"


class TestSolve:
    def test_all_ones(self, cfg):
        code, out, _ = run(["solve", cfg("all_ones.cfg")])
        assert code == 0
        assert "n = 1.66667" in out
        assert "e = 0.1\n" in out
        assert "utility = -8.44797" in out

    def test_corner(self, cfg):
        code, out, _ = run(["solve", cfg("corner.cfg")])
        assert code == 2
        assert "Corner" in out

    def test_missing_tau(self, write_cfg):
        code, _, err = run(["solve", write_cfg(BASE.replace("tau = 0.1\n", ""))])
        assert code == 1
        assert "tau" in err

    def test_validation_error_names_parameter(self, write_cfg):
        code, _, err = run(["solve", write_cfg(BASE.replace("gamma6 = 1", "gamma6 = 1.5"))])
        assert code == 1
        assert "gamma6" in err

    def test_missing_file(self, tmp_path):
        code, _, err = run(["solve", str(tmp_path / "nope.cfg")])
        assert code == 1
        assert "nope.cfg" in err


class TestStatics:
    def test_signs_all_pass(self, cfg):
        code, out, _ = run(["statics", cfg("all_ones.cfg"), "--signs"])
        assert code == 0
        assert out.count("PASS") == 9
        assert "FAIL" not in out

    def test_tabulated_discrepancies(self, cfg, tmp_path):
        csv_path = tmp_path / "d.csv"
        code, out, _ = run(["statics", cfg("gamma3_half.cfg"), "--table1", "--discrepancy-csv", str(csv_path)])
        assert code == 0
        assert "7 of 42 cells" in out
        lines = csv_path.read_text().splitlines()
        assert len(lines) == 43
        assert sum(1 for line in lines[1:] if ",true," in line) == 7

    def test_claims_csv(self, cfg, tmp_path):
        path = tmp_path / "claims.csv"
        code, _, _ = run(["statics", cfg("all_ones.cfg"), "--signs", "--claims-csv", str(path)])
        lines = path.read_text().splitlines()
        assert code == 0 and len(lines) == 10
        assert all(",true," in line for line in lines[1:])

    def test_non_interior(self, cfg):
        assert run(["statics", cfg("corner.cfg")])[0] == 2


class TestVerify:
    def test_seeds(self, cfg):
        code, out, _ = run(["verify", cfg("all_ones.cfg"), "--seeds", "20"])
        assert code == 0
        assert "20/20 PASS" in out

    def test_zero_seeds_only_config(self, cfg):
        code, out, _ = run(["verify", cfg("all_ones.cfg"), "--seeds", "0"])
        assert code == 0
        assert "randomized" not in out

    def test_corrupted_closed_form(self, cfg):
        def corrupted(prefs, econ):
            a = solve_closed_form(prefs, econ)
            return a.replace(e=a.e * 1.05)
        code, out, _ = run(["verify", cfg("all_ones.cfg")], closed_form=corrupted)
        assert code == 3
        assert "FAIL" in out

    def test_corner(self, cfg):
        assert run(["verify", cfg("corner.cfg")])[0] == 2


class TestSweep:
    def test_crowd_out(self, cfg, tmp_path):
        out_csv = tmp_path / "c.csv"
        code, out, _ = run(["sweep", cfg("all_ones.cfg"), "--scenario", "crowd_out", "--out", str(out_csv)])
        assert code == 0
        assert "s: decreasing ✓" in out
        assert out_csv.read_text().startswith("param,value,c,s,p,q,n,e,utility,regime\n")

    def test_gamma3_across_boundary(self, cfg, tmp_path):
        out_csv = tmp_path / "g3.csv"
        code, out, _ = run(["sweep", cfg("all_ones.cfg"), "--param", "gamma3", "--from", "1",
                            "--to", "3", "--steps", "5", "--out", str(out_csv)])
        assert code == 0
        text = out_csv.read_text()
        assert ",Singular\n" in text and ",Corner\n" in text

    def test_greek_param_name(self, cfg, tmp_path):
        code, _, _ = run(["sweep", cfg("all_ones.cfg"), "--param", "γ7", "--from", "1.0", "--to", "2.0",
                          "--steps", "11", "--out", str(tmp_path / "x.csv")])
        assert code == 0

    @pytest.mark.parametrize("flags", [
        ["--param", "gamma3", "--from", "1", "--to", "2", "--steps", "1"],
        ["--param", "gamma3", "--from", "2", "--to", "1"],
        ["--param", "gamma9", "--from", "1", "--to", "2"],
        ["--param", "gamma3"],
        ["--scenario", "crowd_out", "--param", "gamma2"],
        ["--scenario", "bogus"],
    ])
    def test_bad_flags(self, cfg, tmp_path, flags):
        code, _, err = run(["sweep", cfg("all_ones.cfg"), *flags, "--out", str(tmp_path / "x.csv")])
        assert code == 1
        assert err

    def test_base_not_interior(self, cfg, tmp_path):
        code, _, _ = run(["sweep", cfg("corner.cfg"), "--param", "gamma1", "--from", "1", "--to", "2",
                          "--out", str(tmp_path / "x.csv")])
        assert code == 2

    def test_verdict_mismatch_exit(self, cfg, tmp_path, monkeypatch):
        import household_alloc.scenarios as sc
        # a broken classifier must surface as a verdict mismatch
        monkeypatch.setattr(sc, "monotonicity", lambda values, tol=0.0: sc.MIXED)
        code, out, _ = run(["sweep", cfg("all_ones.cfg"), "--scenario", "crowd_out",
                            "--out", str(tmp_path / "x.csv")])
        assert code == 4
        assert "✗" in out

    @pytest.mark.parametrize("scenario", ["qq_frontier", "future_earnings"])
    def test_other_scenarios(self, cfg, tmp_path, scenario):
        code, out, _ = run(["sweep", cfg("gamma3_half.cfg"), "--scenario", scenario,
                            "--out", str(tmp_path / "x.csv")])
        assert code == 0, out
        assert "✗" not in out

    def test_qq_frontier_gamma2(self, cfg, tmp_path):
        code, out, _ = run(["sweep", cfg("all_ones.cfg"), "--scenario", "qq_frontier", "--param", "gamma2",
                            "--out", str(tmp_path / "x.csv")])
        assert code == 0
        assert "e: decreasing ✓" in out


def test_no_command():
    assert run([])[0] == 1


def test_module_entry_point(cfg):
    proc = subprocess.run([sys.executable, "-m", "household_alloc", "solve", cfg("all_ones.cfg")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "regime: Interior" in proc.stdout

import json
import os
import subprocess
import sys


PKG = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "bidisc.cli", *args],
                          capture_output=True, text=True, cwd=cwd or PKG)


class TestInspect:
    def test_kappa(self, tmp_path):
        res = run_cli("--out", str(tmp_path), "inspect", "kappa")
        assert res.returncode == 0
        doc = json.loads(res.stdout)
        assert doc["bidegree"] == [1, 1]
        assert doc["stability"]["consistent"]
        sing = doc["singularities"][0]
        assert abs(sing["location"][0][0] - 1.0) <= 1e-9
        assert abs(sing["nontangential_value"][0] + 1.0) <= 1e-8
        assert (tmp_path / "inspect_kappa.json").exists()

    def test_amy_line(self, tmp_path):
        res = run_cli("--out", str(tmp_path), "inspect", "amy")
        doc = json.loads(res.stdout)
        lines = doc["lines"]
        assert len(lines) == 1
        assert lines[0]["orientation"] == "v"
        assert abs(lines[0]["tau"][0] - 1.0) <= 1e-8
        assert abs(lines[0]["alpha"][0] + 1.0) <= 1e-8

    def test_smooth_symbol(self, tmp_path):
        res = run_cli("--out", str(tmp_path), "inspect", "z1")
        assert res.returncode == 0
        doc = json.loads(res.stdout)
        assert doc["kind"] == "smooth"
        assert doc["lines"][0]["everywhere"]

    def test_bad_symbol_exit_code(self, tmp_path):
        res = run_cli("--out", str(tmp_path), "inspect", "mystery")
        assert res.returncode == 2
        assert "input error" in res.stderr


class TestLevelset:
    def test_kappa_lines_csv(self, tmp_path):
        res = run_cli("--out", str(tmp_path), "--resolution", "256",
                      "levelset", "kappa", "--alpha=-1")
        assert res.returncode == 0
        csvs = list(tmp_path.glob("levelset_*.csv"))
        assert len(csvs) == 1
        body = csvs[0].read_text().splitlines()
        assert body[0] == "branch_id,theta,re_g,im_g"
        assert sum(1 for ln in body if ln.startswith("VLINE:")) == 1
        assert sum(1 for ln in body if ln.startswith("HLINE:")) == 1
        assert len(body) == 3  # header + two line rows, no branches

    def test_amy_branch_rows(self, tmp_path):
        res = run_cli("--out", str(tmp_path), "--resolution", "256",
                      "levelset", "amy", "--alpha=-1")
        assert res.returncode == 0
        body = list(tmp_path.glob("levelset_*.csv"))[0].read_text().splitlines()
        branch_rows = [ln for ln in body[1:] if not ln.startswith(("VLINE", "HLINE"))]
        assert len(branch_rows) == 256

    def test_kappa_generic_value(self, tmp_path):
        res = run_cli("--out", str(tmp_path), "--resolution", "256",
                      "levelset", "kappa", "--alpha=i")
        assert res.returncode == 0
        assert "1 branch(es), 0 vertical / 0 horizontal" in res.stdout

    def test_nonunimodular_alpha(self, tmp_path):
        res = run_cli("--out", str(tmp_path), "levelset", "kappa", "--alpha=0")
        assert res.returncode == 2


class TestVerdict:
    def test_identity_pair(self, tmp_path):
        res = run_cli("--out", str(tmp_path), "--resolution", "512",
                      "--samples", "20000", "verdict", "z1", "z2")
        assert res.returncode == 0
        doc = json.loads((tmp_path / "verdict.json").read_text())
        assert doc["conclusion_per_beta"]["0"] == "BOUNDED_CONSISTENT"
        assert doc["triggered_rule"] == "first-order-condition"
        assert (tmp_path / "ladder_beta0.csv").exists()

    def test_reruns_byte_identical(self, tmp_path):
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        for out in (a_dir, b_dir):
            res = run_cli("--out", str(out), "--resolution", "512",
                          "--samples", "20000", "verdict", "z1", "z2")
            assert res.returncode == 0
        a = (a_dir / "verdict.json").read_bytes()
        b = (b_dir / "verdict.json").read_bytes()
        # output directory is part of the job config; normalize it
        a = a.replace(str(a_dir).encode(), b"OUT")
        b = b.replace(str(b_dir).encode(), b"OUT")
        assert a == b

    def test_inline_json_symbol(self, tmp_path):
        spec = json.dumps({"psi": {"bidegree": [1, 0],
                                   "coeffs": [[[0, 0]], [[1, 0]]]}})
        res = run_cli("--out", str(tmp_path), "--resolution", "512",
                      "--samples", "20000", "verdict", spec, "z2")
        assert res.returncode == 0

    def test_symbol_file(self, tmp_path):
        path = tmp_path / "sym.json"
        path.write_text(json.dumps({"psi": {"bidegree": [0, 1],
                                            "coeffs": [[[0, 0], [1, 0]]]}}))
        res = run_cli("--out", str(tmp_path), "--resolution", "512",
                      "--samples", "20000", "verdict", "z1", str(path))
        assert res.returncode == 0

    def test_flags_after_subcommand_with_extras(self, tmp_path):
        res = run_cli("verdict", "kappa", "amy", "--out", str(tmp_path),
                      "--resolution", "512", "--samples", "20000",
                      "--no-window", "--anisotropic", "--alpha-pair=-1,-1")
        assert res.returncode == 0, res.stderr
        doc = json.loads((tmp_path / "verdict.json").read_text())
        assert doc["conclusion_per_beta"]["0"] == "NOT_BOUNDED"
        assert doc["anisotropic"] is not None
        assert len(doc["anisotropic"]) == 9


class TestReproduce:
    def test_single_row_reduced_samples(self, tmp_path):
        res = run_cli("--out", str(tmp_path), "reproduce-examples",
                      "--samples", "30000", "--only", "sublevel n=0 beta=0")
        assert res.returncode == 0, res.stdout + res.stderr
        assert "[PASS] sublevel n=0 beta=0" in res.stdout
        table = json.loads((tmp_path / "reference_table.json").read_text())
        assert len(table["rows"]) == 1
        assert table["rows"][0]["passed"]

    def test_unknown_filter(self, tmp_path):
        res = run_cli("--out", str(tmp_path), "reproduce-examples",
                      "--only", "nonexistent-row")
        assert res.returncode == 2

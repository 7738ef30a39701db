import json
import math

import numpy as np
import pytest

from toeplitz_spectra import __version__
from toeplitz_spectra.cli import main


def run(argv):
    return main(argv)


def read_rows(path):
    rows = []
    header = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                header.append(line)
            elif line and not line.startswith("grid_point"):
                t, re, im, flag = line.split(",")
                rows.append((float(t), float(re), float(im), int(flag)))
    return header, rows


class TestGamma:
    def test_elliptic_constant(self, tmp_path):
        out = tmp_path / "g.csv"
        code = run(["gamma", "--geometry", "elliptic", "--lambda", "0",
                    "--symbol", "constant:1", "--grid", "0:50", "--out", str(out)])
        assert code == 0
        header, rows = read_rows(out)
        assert len(rows) == 51
        assert all(abs(re - 1.0) <= 1e-10 and im == 0.0 and flag == 0 for _, re, im, flag in rows)
        assert header[0].startswith(f"# toeplitz-spectra v{__version__} geometry=elliptic")
        assert "symbol=constant:1.0" in header[0]

    def test_parabolic_point_mass_row(self, tmp_path):
        out = tmp_path / "g.csv"
        code = run(["gamma", "--geometry", "parabolic", "--lambda", "0",
                    "--symbol", "delta:loc=1", "--grid", "0.1:10:100", "--out", str(out)])
        assert code == 0
        _, rows = read_rows(out)
        by_eta = {round(t, 10): re for t, re, _, _ in rows}
        assert by_eta[0.5] == pytest.approx(math.exp(-1.0), abs=1e-10)

    def test_hyperbolic_indicator_row(self, tmp_path):
        out = tmp_path / "g.csv"
        code = run(["gamma", "--geometry", "hyperbolic", "--lambda", "0",
                    "--symbol", "indicator:0,1.5707963267948966",
                    "--grid", "-10:10:401", "--out", str(out)])
        assert code == 0
        _, rows = read_rows(out)
        at_zero = [re for t, re, _, _ in rows if t == 0.0]
        assert at_zero and at_zero[0] == pytest.approx(0.5, abs=1e-9)

    def test_deterministic_bytes(self, tmp_path):
        blobs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            code = run(["gamma", "--geometry", "elliptic", "--lambda", "1.5",
                        "--symbol", "sum(indicator:0,0.5; delta:loc=0.25,coef=2)",
                        "--grid", "0:30", "--out", str(out)])
            assert code == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]

    def test_json_format(self, tmp_path):
        out = tmp_path / "g.json"
        code = run(["gamma", "--geometry", "elliptic", "--lambda", "0",
                    "--symbol", "constant:2", "--grid", "0:5", "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["version"] == __version__
        assert len(doc["rows"]) == 6
        assert doc["rows"][3]["re"] == pytest.approx(2.0)

    def test_config_file_with_override(self, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "geometry": "elliptic", "lambda": 0, "symbol": "constant:1",
            "grid": "0:10", "out": str(tmp_path / "from_config.csv"),
        }))
        out = tmp_path / "override.csv"
        code = run(["gamma", "--config", str(cfg), "--out", str(out)])
        assert code == 0
        assert out.exists()
        _, rows = read_rows(out)
        assert len(rows) == 11

    def test_config_errors_exit_2(self, tmp_path):
        assert run(["gamma", "--geometry", "toroidal", "--lambda", "0",
                    "--symbol", "constant:1", "--grid", "0:5",
                    "--out", str(tmp_path / "x.csv")]) == 2
        assert run(["gamma", "--geometry", "elliptic", "--lambda", "0",
                    "--symbol", "mystery:1", "--grid", "0:5",
                    "--out", str(tmp_path / "x.csv")]) == 2
        assert run(["gamma", "--geometry", "parabolic", "--lambda", "0",
                    "--symbol", "constant:1", "--grid", "list:-1,1",
                    "--out", str(tmp_path / "x.csv")]) == 2
        assert run(["gamma", "--geometry", "elliptic", "--lambda", "-2",
                    "--symbol", "constant:1", "--grid", "0:5",
                    "--out", str(tmp_path / "x.csv")]) == 2

    def test_nonconvergence_exits_3_with_partial_table(self, tmp_path):
        out = tmp_path / "g.csv"
        code = run(["gamma", "--geometry", "hyperbolic", "--lambda", "0",
                    "--symbol", "power:beta=0.5,alpha=1", "--grid", "list:5000",
                    "--tol", "1e-9", "--out", str(out)])
        assert code == 3
        _, rows = read_rows(out)
        assert len(rows) == 1 and rows[0][3] == 1  # flagged row still written


class TestVerify:
    def test_elliptic_diag(self, tmp_path):
        out = tmp_path / "v.json"
        code = run(["verify", "elliptic-diag", "--lambda", "0",
                    "--symbol", "indicator:0,0.5", "--N", "12", "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["pass"] is True
        assert doc["matrix"]["offdiag_max"] < 1e-8

    def test_normalization_names_winner(self, tmp_path):
        out = tmp_path / "v.json"
        code = run(["verify", "normalization", "--lambda", "2.5", "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["winner"] == "1/Gamma(lam+1)"

    def test_kernel(self, tmp_path):
        out = tmp_path / "v.json"
        code = run(["verify", "kernel", "--lambda", "0", "--eta", "2",
                    "--mu", "1", "--z", "1j", "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["comparisons"][0]["pass"] is True

    def test_unitarity(self, tmp_path):
        out = tmp_path / "v.json"
        code = run(["verify", "unitarity", "--lambda", "1", "--mu", "1", "--nu", "2",
                    "--out", str(out)])
        assert code == 0

    def test_unknown_case_exits_2(self, tmp_path):
        assert run(["verify", "normalization", "--lambda", "-5",
                    "--out", str(tmp_path / "v.json")]) == 2


class TestClassify:
    def test_builtin_reflection(self, tmp_path):
        out = tmp_path / "c.json"
        code = run(["classify", "--builtin", "reflection", "--metric", "adjacent",
                    "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["verdict"] == "violates"

    def test_builtin_hmv(self, tmp_path):
        out = tmp_path / "c.json"
        code = run(["classify", "--builtin", "hmv", "--metric", "log", "--out", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["verdict"] == "violates"

    def test_table_input(self, tmp_path):
        table = tmp_path / "g.csv"
        code = run(["gamma", "--geometry", "parabolic", "--lambda", "0",
                    "--symbol", "delta:loc=1", "--grid", "log:0.001:10000:200",
                    "--out", str(table)])
        assert code == 0
        out = tmp_path / "c.json"
        code = run(["classify", "--in", str(table), "--metric", "log", "--out", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["verdict"] == "consistent-with-membership"

    def test_requires_exactly_one_input(self, tmp_path):
        assert run(["classify", "--metric", "log", "--out", str(tmp_path / "c.json")]) == 2
        assert run(["classify", "--metric", "log", "--builtin", "hmv",
                    "--in", "x.csv", "--out", str(tmp_path / "c.json")]) == 2


class TestThreads:
    def test_thread_pool_output_matches_serial(self, tmp_path, monkeypatch):
        serial = tmp_path / "serial.csv"
        run(["gamma", "--geometry", "parabolic", "--lambda", "1",
             "--symbol", "indicator:0,1", "--grid", "log:0.1:10:24", "--out", str(serial)])
        monkeypatch.setenv("TOEPLITZ_SPECTRA_THREADS", "4")
        threaded = tmp_path / "threaded.csv"
        run(["gamma", "--geometry", "parabolic", "--lambda", "1",
             "--symbol", "indicator:0,1", "--grid", "log:0.1:10:24", "--out", str(threaded)])
        assert serial.read_bytes() == threaded.read_bytes()

    def test_bad_thread_env_exits_2(self, tmp_path, monkeypatch):
        monkeypatch.setenv("TOEPLITZ_SPECTRA_THREADS", "many")
        assert run(["gamma", "--geometry", "elliptic", "--lambda", "0",
                    "--symbol", "constant:1", "--grid", "0:3",
                    "--out", str(tmp_path / "x.csv")]) == 2


class TestSelftest:
    def test_exit_codes_follow_battery(self, monkeypatch):
        from toeplitz_spectra import acceptance

        monkeypatch.setattr(acceptance, "run_all",
                            lambda verbose=False: [("a", True, ""), ("b", True, "")])
        assert run(["selftest"]) == 0
        monkeypatch.setattr(acceptance, "run_all",
                            lambda verbose=False: [("a", True, ""), ("b", False, "boom")])
        assert run(["selftest"]) == 4

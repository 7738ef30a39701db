import json
import pathlib
import shutil

import pytest

from toeplitz_spectra_plots.cli import main
from toeplitz_spectra_plots.figures import FigureSpec, render
from toeplitz_spectra_plots.io import SchemaError, read_report, read_table

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


class TestIO:
    def test_read_table(self):
        table = read_table(FIXTURES / "gamma_parabolic_delta.csv")
        assert len(table.grid) == 80
        assert table.meta["geometry"] == "parabolic"
        assert (table.flags == 0).all()

    def test_read_report(self):
        doc = read_report(FIXTURES / "verify_elliptic_diag.json")
        assert doc["case"] == "elliptic-diag"
        assert "matrix" in doc

    def test_version_mismatch_warns_not_errors(self, tmp_path):
        src = (FIXTURES / "gamma_parabolic_delta.csv").read_text()
        target = tmp_path / "old.csv"
        target.write_text(src.replace("toeplitz-spectra v0.1.0", "toeplitz-spectra v9.9.9"))
        with pytest.warns(UserWarning, match="v9.9.9"):
            table = read_table(target)
        assert len(table.grid) == 80

    def test_schema_errors(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("not,a,table\n")
        with pytest.raises(SchemaError):
            read_table(bad)
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        with pytest.raises(SchemaError):
            read_table(empty)
        notjson = tmp_path / "x.json"
        notjson.write_text("{]")
        with pytest.raises(SchemaError):
            read_report(notjson)


class TestRender:
    def test_gamma_curve(self, tmp_path):
        out = tmp_path / "curve.png"
        result = render(FigureSpec((str(FIXTURES / "gamma_parabolic_delta.csv"),),
                                   "gamma-curve", str(out)))
        assert out.exists() and out.stat().st_size > 0
        assert "geometry=parabolic" in result.annotations[0]

    def test_gamma_curve_constant_is_flat_line(self, tmp_path):
        out = tmp_path / "flat.png"
        render(FigureSpec((str(FIXTURES / "gamma_elliptic_const.csv"),),
                          "gamma-curve", str(out), logx="off"))
        assert out.exists() and out.stat().st_size > 0

    def test_matrix_heatmap(self, tmp_path):
        out = tmp_path / "heat.png"
        result = render(FigureSpec((str(FIXTURES / "verify_elliptic_diag.json"),),
                                   "matrix-heatmap", str(out)))
        assert out.exists() and out.stat().st_size > 0
        doc = read_report(FIXTURES / "verify_elliptic_diag.json")
        assert f"{doc['matrix']['offdiag_max']:.3e}" in result.annotations[0]

    def test_heatmap_annotation_comes_from_data(self, tmp_path):
        # tamper with the recorded residual: the annotation must follow the
        # report field, proving it is read from data and not recomputed
        doc = read_report(FIXTURES / "verify_elliptic_diag.json")
        doc["matrix"]["offdiag_max"] = 3.141e-4
        tampered = tmp_path / "tampered.json"
        tampered.write_text(json.dumps(doc))
        result = render(FigureSpec((str(tampered),), "matrix-heatmap",
                                   str(tmp_path / "heat.png")))
        assert "3.141e-04" in result.annotations[0]

    def test_modulus_decay_two_curves(self, tmp_path):
        out = tmp_path / "mod.png"
        result = render(FigureSpec(
            (str(FIXTURES / "classify_hmv.json"), str(FIXTURES / "classify_delta.json")),
            "modulus-decay", str(out)))
        assert out.exists() and out.stat().st_size > 0
        joined = " ".join(result.annotations)
        assert "violates" in joined and "consistent-with-membership" in joined

    def test_rendering_is_deterministic(self, tmp_path):
        blobs = []
        for name in ("a.png", "b.png"):
            out = tmp_path / name
            render(FigureSpec((str(FIXTURES / "gamma_parabolic_delta.csv"),),
                              "gamma-curve", str(out)))
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]

    def test_rendering_is_read_only(self, tmp_path):
        src = FIXTURES / "classify_hmv.json"
        copy = tmp_path / "in.json"
        shutil.copy(src, copy)
        before = copy.read_bytes()
        render(FigureSpec((str(copy),), "modulus-decay", str(tmp_path / "m.png")))
        assert copy.read_bytes() == before

    def test_wrong_report_kind(self, tmp_path):
        with pytest.raises(SchemaError):
            render(FigureSpec((str(FIXTURES / "classify_hmv.json"),),
                              "matrix-heatmap", str(tmp_path / "x.png")))

    def test_spec_validation(self, tmp_path):
        with pytest.raises(SchemaError):
            FigureSpec((), "gamma-curve", str(tmp_path / "x.png"))
        with pytest.raises(SchemaError):
            FigureSpec(("a.csv",), "pie-chart", str(tmp_path / "x.png"))


class TestCli:
    def test_all_three_kinds(self, tmp_path):
        assert main(["--in", str(FIXTURES / "gamma_parabolic_delta.csv"),
                     "--kind", "gamma-curve", "--out", str(tmp_path / "a.png")]) == 0
        assert main(["--in", str(FIXTURES / "verify_elliptic_diag.json"),
                     "--kind", "matrix-heatmap", "--out", str(tmp_path / "b.png")]) == 0
        assert main(["--in", str(FIXTURES / "classify_hmv.json"),
                     "--in", str(FIXTURES / "classify_delta.json"),
                     "--kind", "modulus-decay", "--out", str(tmp_path / "c.png")]) == 0
        for name in ("a.png", "b.png", "c.png"):
            assert (tmp_path / name).stat().st_size > 0

    def test_bad_input_exits_2(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("nope")
        assert main(["--in", str(bad), "--kind", "gamma-curve",
                     "--out", str(tmp_path / "x.png")]) == 2
        assert main(["--in", str(tmp_path / "missing.csv"), "--kind", "gamma-curve",
                     "--out", str(tmp_path / "x.png")]) == 2

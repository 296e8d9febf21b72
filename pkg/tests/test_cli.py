"""Tests for the command-line interface: exit codes and report shapes."""

import json

import pytest

from tqdstab.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


class TestModelBuild:
    def test_ds(self, capsys):
        code, report = invoke(capsys, "model", "build", "--type", "ds",
                              "--L", "3")
        assert code == 0
        assert report["kind"] == "ds"
        assert report["edge_dims"] == [4]
        assert report["n_sites"] == 18
        assert report["n_generators"] == 36
        assert "s" in report["labels"]

    def test_defaults_to_tqd_when_n_given(self, capsys):
        code, report = invoke(capsys, "model", "build", "--N", "3",
                              "--n", "1", "--L", "3")
        assert code == 0
        assert report["kind"] == "tqd"
        assert report["edge_dims"] == [9]

    def test_bad_factor_is_spec_error(self, capsys):
        code, _ = invoke(capsys, "model", "build", "--N", "6", "--n", "0",
                         "--L", "3")
        assert code == 2


class TestVerify:
    def test_commuting(self, capsys):
        code, report = invoke(capsys, "verify", "commuting", "--type", "ds",
                              "--L", "3")
        assert code == 0
        assert report["commuting"] is True
        assert report["violations"] == []

    def test_scalar(self, capsys):
        code, report = invoke(capsys, "verify", "scalar", "--type", "ds",
                              "--L", "3")
        assert code == 0 and report["consistent"] is True

    def test_degeneracy_ds(self, capsys):
        code, report = invoke(capsys, "verify", "degeneracy", "--type", "ds",
                              "--L", "3")
        assert code == 0
        assert report["logical_dimension"] == report["expected"] == 4

    def test_degeneracy_tc(self, capsys):
        code, report = invoke(capsys, "verify", "degeneracy", "--type", "tc",
                              "--N", "3", "--L", "3")
        assert code == 0 and report["logical_dimension"] == 9

    def test_condensation_equality(self, capsys):
        code, report = invoke(capsys, "verify", "condensation-equality",
                              "--N", "2", "--n", "1", "--L", "3")
        assert code == 0 and report["equal"] is True

    def test_unknown_check_is_usage_error(self, capsys):
        code = run(["verify", "wibble", "--type", "ds"])
        capsys.readouterr()
        assert code == 2


class TestAnyons:
    def test_extract_ds(self, capsys):
        code, report = invoke(capsys, "anyons", "extract", "--type", "ds")
        assert code == 0
        assert report["iso_match"] is True
        assert report["theta"]["1,0"] == "1/4"
        assert report["theta"]["0,1"] == "3/4"

    def test_extract_tc(self, capsys):
        code, report = invoke(capsys, "anyons", "extract", "--type", "tc",
                              "--N", "2")
        assert code == 0
        assert report["iso_match"] is True
        assert report["fusion_orders"] == {"e": 2, "m": 2}


class TestTheory:
    def test_tqd(self, capsys):
        code, report = invoke(capsys, "theory", "tqd", "--N", "2", "--n", "1")
        assert code == 0
        assert report["census"] == {"0/1": 2, "1/4": 1, "3/4": 1}

    def test_condense(self, capsys):
        code, report = invoke(capsys, "theory", "condense", "--N", "2",
                              "--n", "1")
        assert code == 0 and report["matches_tqd"] is True

    def test_iso(self, capsys):
        code, report = invoke(capsys, "theory", "iso", "--N", "3", "--n", "1")
        assert code == 0
        assert report["kmatrix_match"] and report["condensation_match"]

    def test_fusion_group(self, capsys):
        code, report = invoke(capsys, "theory", "fusion-group", "--N", "2,2",
                              "--n", "0,0", "--nij", "0,1,1")
        assert code == 0
        assert report["fusion_group"] == [4, 4]
        assert report["match"] is True

    def test_lagrangian(self, capsys):
        code, report = invoke(capsys, "theory", "lagrangian", "--N", "2",
                              "--n", "0")
        assert code == 0 and report["count"] == 2  # e and m boundaries

    def test_stack(self, capsys):
        code, report = invoke(capsys, "theory", "stack", "--N", "2",
                              "--n", "0")
        assert code == 0 and report["census"]["0/1"] >= 4

    def test_cocycle(self, capsys):
        code, report = invoke(capsys, "theory", "cocycle", "--N", "2",
                              "--n", "1")
        assert code == 0
        assert report["samples"]["(1,)|(1,)|(1,)"] == "1/2"

    def test_missing_n_is_spec_error(self, capsys):
        code = run(["theory", "tqd"])
        capsys.readouterr()
        assert code == 2


class TestKmatrix:
    def test_build(self, capsys):
        code, report = invoke(capsys, "kmatrix", "build", "--N", "2",
                              "--n", "1")
        assert code == 0 and report["K"] == [[0, 2], [2, -2]]

    def test_census(self, capsys):
        code, report = invoke(capsys, "kmatrix", "census", "--N", "2,2",
                              "--n", "1,1", "--nij", "0,1,1")
        assert code == 0
        assert report["census"] == {"0/1": 4, "1/4": 6, "3/4": 6}

    def test_condense_check(self, capsys):
        code, report = invoke(capsys, "kmatrix", "condense-check", "--N", "3",
                              "--n", "1")
        assert code == 0 and report["all_identities_hold"] is True

    def test_transform(self, capsys, tmp_path):
        spec = tmp_path / "kw.json"
        spec.write_text(json.dumps(
            {"K": [[0, 2], [2, 0]], "W": [[0, 1], [1, 0]]}))
        code, report = invoke(capsys, "kmatrix", "transform", "--spec",
                              str(spec))
        assert code == 0 and report["K"] == [[0, 2], [2, 0]]

    def test_transform_needs_spec(self, capsys):
        code = run(["kmatrix", "transform"])
        capsys.readouterr()
        assert code == 2

    def test_unreadable_spec(self, capsys, tmp_path):
        code = run(["kmatrix", "build", "--spec", str(tmp_path / "nope.json")])
        capsys.readouterr()
        assert code == 2


class TestSptAndAmplitude:
    def test_spt_cocycle(self, capsys):
        code, report = invoke(capsys, "spt", "cocycle", "--ell", "4",
                              "--Ly", "5")
        assert code == 0
        assert report["omega"]["111"] == "1/2"
        assert report["cocycle_valid"] is True

    def test_appendixa_check(self, capsys):
        code, report = invoke(capsys, "appendixa", "check", "--samples", "5")
        assert code == 0
        assert report["psi_identity"] == {"checked": 5, "ok": True}
        assert report["table1"]["agree"] is True


class TestPlumbing:
    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code = run(["--out", str(path), "verify", "scalar", "--type", "ds",
                    "--L", "3"])
        capsys.readouterr()
        assert code == 0
        assert json.loads(path.read_text())["consistent"] is True

    def test_missing_subcommand(self, capsys):
        code = run([])
        capsys.readouterr()
        assert code == 2

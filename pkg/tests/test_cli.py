"""End-to-end CLI behavior: exit codes, JSON reports, determinism."""

import json

import pytest

from biquad import jsonio
from biquad.classes import m_identity
from biquad.cli import main
from biquad.core import MonicParams, monic_to_tensor


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse(out):
    return json.loads(out)


@pytest.fixture
def identity_file(tmp_path):
    path = tmp_path / "identity.json"
    jsonio.save_tensor(m_identity(2, 2), path)
    return str(path)


@pytest.fixture
def monic_ones_file(tmp_path):
    path = tmp_path / "ones.json"
    jsonio.save_tensor(monic_to_tensor(MonicParams(2, 2, 1, 1, 1)), path)
    return str(path)


class TestCheckDD:
    def test_identity_passes(self, capsys, identity_file):
        code, out, _ = run(capsys, "check-dd", identity_file)
        assert code == 0
        assert parse(out)["diagonally_dominated"] is True

    def test_monic_ones_fails_with_rows(self, capsys, monic_ones_file):
        code, out, _ = run(capsys, "check-dd", monic_ones_file)
        assert code == 1
        report = parse(out)
        assert report["diagonally_dominated"] is False
        assert len(report["violations"]) == 4
        assert report["violations"][0]["bound"] == "3"


class TestDecomposeAndVerify:
    def test_roundtrip_exit_zero(self, capsys, tmp_path, identity_file):
        cert = tmp_path / "cert.json"
        code, _, _ = run(capsys, "decompose-dd", identity_file, "-o", str(cert))
        assert code == 0
        assert cert.exists()
        code, out, _ = run(capsys, "verify", str(cert), identity_file)
        assert code == 0
        assert parse(out)["match"] is True

    def test_verify_detects_mismatch(self, capsys, tmp_path, identity_file, monic_ones_file):
        cert = tmp_path / "cert.json"
        run(capsys, "decompose-dd", identity_file, "-o", str(cert))
        code, out, _ = run(capsys, "verify", str(cert), monic_ones_file)
        assert code == 1
        assert parse(out)["match"] is False

    def test_decompose_dd_refuses_non_dominated(self, capsys, monic_ones_file):
        code, out, _ = run(capsys, "decompose-dd", monic_ones_file)
        assert code == 1

    def test_decompose_monic_verify_roundtrip(self, capsys, tmp_path):
        cert = tmp_path / "cert.json"
        tensor = tmp_path / "tensor.json"
        jsonio.save_tensor(monic_to_tensor(MonicParams(3, 3, "1/2", "1/2", "1/2")), tensor)
        code, _, _ = run(capsys, "decompose-monic", "-m", "3", "-n", "3",
                         "-a", "1/2", "-b", "1/2", "-c", "1/2", "-o", str(cert))
        assert code == 0
        code, out, _ = run(capsys, "verify", str(cert), str(tensor))
        assert code == 0 and parse(out)["match"] is True


class TestClassifyMonic:
    def test_psd_with_negative_rational_flags(self, capsys):
        code, out, _ = run(capsys, "classify-monic", "-m", "4", "-n", "3",
                           "-a", "-1/3", "-b", "-1/2", "-c", "1/6")
        assert code == 0
        report = parse(out)
        assert report["psd"] is True
        assert report["eigenvalues"]["iv"] == "0"
        assert report["barycentric"] is not None

    def test_ones_3x3(self, capsys):
        code, out, _ = run(capsys, "classify-monic", "-m", "3", "-n", "3",
                           "-a", "1", "-b", "1", "-c", "1")
        assert code == 0
        report = parse(out)
        assert report["psd"] is True
        assert report["eigenvalues"]["iii"] == "0"

    def test_non_psd_exits_one(self, capsys):
        code, out, _ = run(capsys, "classify-monic", "-m", "2", "-n", "2",
                           "-a", "2", "-b", "0", "-c", "0")
        assert code == 1
        assert parse(out)["psd"] is False


class TestVertices:
    def test_4x4(self, capsys):
        code, out, _ = run(capsys, "vertices", "-m", "4", "-n", "4")
        assert code == 0
        report = parse(out)
        assert report["V2"] == ["-1/3", "-1/3", "1/9"]

    def test_4x3(self, capsys):
        code, out, _ = run(capsys, "vertices", "-m", "4", "-n", "3")
        report = parse(out)
        assert report["V1"] == ["1", "1", "1"]
        assert report["V2"] == ["-1/3", "-1/2", "1/6"]
        assert report["V3"] == ["-1/3", "1", "-1/3"]
        assert report["V4"] == ["1", "-1/2", "-1/2"]


class TestAuditGrid:
    def test_coarse_grid_agrees(self, capsys):
        code, out, _ = run(capsys, "audit-grid", "-m", "2", "-n", "2",
                           "--step", "1/2", "--range", "1")
        assert code == 0
        report = parse(out)
        assert report["agree"] is True
        assert report["points"] == 125
        assert report["disagreements"] == []


class TestGenClassifyProbe:
    def test_gen_emits_valid_tensor(self, capsys, tmp_path):
        out_path = tmp_path / "dd.json"
        code, _, _ = run(capsys, "gen", "--class", "dd", "-m", "2", "-n", "2",
                         "--seed", "5", "-o", str(out_path))
        assert code == 0
        t = jsonio.load_tensor(out_path)
        assert (t.m, t.n) == (2, 2)
        code, out, _ = run(capsys, "check-dd", str(out_path))
        assert code == 0

    def test_classify_report(self, capsys, identity_file):
        code, out, _ = run(capsys, "classify", identity_file)
        assert code == 0
        report = parse(out)
        assert report["is_z"] and report["is_b0"] and report["is_dd"]
        assert report["m_tensor"]["verdict"] == "yes"

    def test_probe_identity(self, capsys, identity_file):
        code, out, _ = run(capsys, "probe", identity_file)
        assert code == 0
        report = parse(out)
        assert report["status"] == "flattening_psd"
        assert report["certified"] is True

    def test_sweep_csv(self, capsys, tmp_path):
        csv_path = tmp_path / "sweep.csv"
        code, out, _ = run(capsys, "sweep", "--class", "m_tensor", "-m", "2", "-n", "2",
                           "--trials", "3", "--seed", "7", "--max-iter", "400",
                           "-o", str(csv_path))
        assert code == 0
        lines = csv_path.read_text().strip().splitlines()
        assert len(lines) == 4
        report = parse(out)
        assert report["trials"] == 3


class TestEval:
    def test_value(self, capsys, monic_ones_file):
        code, out, _ = run(capsys, "eval", monic_ones_file, "-x", "1,1", "-y", "1,1")
        assert code == 0
        assert parse(out)["value"] == "16"

    def test_rational_vectors(self, capsys, identity_file):
        code, out, _ = run(capsys, "eval", identity_file, "-x", "1/2,1/2", "-y", "2,0")
        assert code == 0
        assert parse(out)["value"] == "2"

    def test_negative_leading_vector_value(self, capsys, identity_file):
        code, out, _ = run(capsys, "eval", identity_file, "-x", "-1,2/3", "-y", "-1/2,1")
        assert code == 0
        # (1 + 4/9) * (1/4 + 1) = 13/9 * 5/4 = 65/36
        assert parse(out)["value"] == "65/36"

    def test_wrong_length_is_usage_error(self, capsys, identity_file):
        code, _, err = run(capsys, "eval", identity_file, "-x", "1,2,3", "-y", "1,1")
        assert code == 2


class TestErrorPaths:
    def test_malformed_json_exit_two_with_position(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"m": 2, "n": 2,\n  "entries": [}\n')
        code, _, err = run(capsys, "check-dd", str(bad))
        assert code == 2
        assert "line 2" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "check-dd", "/nonexistent/tensor.json")
        assert code == 2

    def test_unknown_command_usage_error(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_dimension_mismatch_in_verify(self, capsys, tmp_path, identity_file):
        cert = tmp_path / "c.json"
        from biquad.monic import vertex_sos

        jsonio.save_certificate(vertex_sos(1, 3, 3), cert)
        code, _, err = run(capsys, "verify", str(cert), identity_file)
        assert code == 2


class TestDeterminism:
    def test_byte_identical_reports(self, capsys, identity_file):
        _, out1, _ = run(capsys, "classify", identity_file, "--seed", "3")
        _, out2, _ = run(capsys, "classify", identity_file, "--seed", "3")
        assert out1 == out2

    def test_gen_deterministic(self, capsys):
        _, out1, _ = run(capsys, "gen", "--class", "b0", "-m", "2", "-n", "3", "--seed", "9")
        _, out2, _ = run(capsys, "gen", "--class", "b0", "-m", "2", "-n", "3", "--seed", "9")
        assert out1 == out2

    def test_quiet_suppresses_output(self, capsys, identity_file):
        code, out, _ = run(capsys, "check-dd", identity_file, "--quiet")
        assert code == 0
        assert out == ""

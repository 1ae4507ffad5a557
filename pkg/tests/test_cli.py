import math

import numpy as np
import pytest

from orthlag.cli import main
from orthlag.transform import read_coefficients, write_coefficients
from orthlag.transform import CoefficientField


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def geometric_coefficient(n: int) -> float:
    return (2.0 / 3.0) * (1.0 / 3.0) ** n


class TestQuad:
    def test_csv_header_and_rows(self, capsys):
        code, out, _ = run(capsys, "quad", "--nodes", "4")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "node,weight,log_modified_weight"
        assert len(lines) == 5
        nodes = [float(line.split(",")[0]) for line in lines[1:]]
        assert nodes == sorted(nodes)

    def test_weights_sum_to_one(self, capsys):
        code, out, _ = run(capsys, "quad", "--nodes", "16")
        weights = [float(line.split(",")[1]) for line in out.splitlines()[1:]]
        assert math.fsum(weights) == pytest.approx(1.0, abs=1e-13)

    def test_write_to_file(self, tmp_path, capsys):
        path = tmp_path / "rule.csv"
        code, out, _ = run(capsys, "quad", "--nodes", "8", "--out", str(path))
        assert code == 0 and out == ""
        assert path.read_text().startswith("node,weight,log_modified_weight")


class TestAnalyze:
    def test_exp_decay_matches_closed_form(self, tmp_path, capsys):
        path = tmp_path / "a.txt"
        code, _, _ = run(
            capsys, "analyze", "--fn", "exp-decay", "--degree", "20",
            "--nodes", "64", "--out", str(path),
        )
        assert code == 0
        a = read_coefficients(path)
        for n in range(21):
            assert a.get((n,)) == pytest.approx(geometric_coefficient(n), abs=1e-10)

    def test_laguerre_index_field(self, tmp_path, capsys):
        path = tmp_path / "a.txt"
        code, _, _ = run(
            capsys, "analyze", "--fn", "l:3", "--degree", "8", "--out", str(path),
        )
        assert code == 0
        a = read_coefficients(path)
        assert a.get((3,)) == pytest.approx(1.0, abs=1e-10)
        assert a.get((2,)) == pytest.approx(0.0, abs=1e-10)

    def test_undersized_rule_is_domain_error(self, tmp_path, capsys):
        code, _, err = run(
            capsys, "analyze", "--fn", "exp-decay", "--degree", "20",
            "--nodes", "4", "--out", str(tmp_path / "a.txt"),
        )
        assert code == 2
        assert "domain error" in err

    def test_deterministic_across_runs(self, tmp_path, capsys):
        p1, p2 = tmp_path / "a1.txt", tmp_path / "a2.txt"
        for path in (p1, p2):
            run(capsys, "analyze", "--fn", "exp-decay", "--dim", "2",
                "--degree", "8", "--out", str(path))
        assert p1.read_bytes() == p2.read_bytes()


class TestSynthesize:
    def test_roundtrip_values(self, tmp_path, capsys):
        coeffs = tmp_path / "a.txt"
        run(capsys, "analyze", "--fn", "exp-decay", "--degree", "30",
            "--nodes", "64", "--out", str(coeffs))
        pts = tmp_path / "pts.csv"
        xs = [0.0, 0.5, 2.0, 7.5]
        pts.write_text("\n".join(repr(x) for x in xs) + "\n")
        out = tmp_path / "vals.csv"
        code, _, _ = run(capsys, "synthesize", "--in", str(coeffs),
                         "--points", str(pts), "--out", str(out))
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "x1,value"
        for line, x in zip(lines[1:], xs):
            val = float(line.split(",")[1])
            assert val == pytest.approx(math.exp(-x), abs=1e-8)

    def test_dimension_mismatch_is_domain_error(self, tmp_path, capsys):
        coeffs = tmp_path / "a.txt"
        run(capsys, "analyze", "--fn", "exp-decay", "--dim", "2",
            "--degree", "5", "--out", str(coeffs))
        pts = tmp_path / "pts.csv"
        pts.write_text("1.0\n2.0\n")
        code, _, _ = run(capsys, "synthesize", "--in", str(coeffs),
                         "--points", str(pts), "--out", str(tmp_path / "v.csv"))
        assert code == 2


class TestOperatorAndPropagate:
    def make_unit(self, tmp_path, n=(2, 3)):
        a = CoefficientField(len(n), "total", sum(n), {tuple(n): 1.0})
        path = tmp_path / "unit.txt"
        write_coefficients(a, path)
        return path

    def test_apply_scales_by_order(self, tmp_path, capsys):
        src = self.make_unit(tmp_path)
        out = tmp_path / "out.txt"
        code, _, _ = run(capsys, "operator", "apply", "--power", "1",
                         "--in", str(src), "--out", str(out))
        assert code == 0
        assert read_coefficients(out).get((2, 3)) == 5.0

    def test_propagate_halves_at_log2_over_order(self, tmp_path, capsys):
        src = self.make_unit(tmp_path, n=(1,))
        out = tmp_path / "out.txt"
        code, _, _ = run(capsys, "propagate", "--time", repr(math.log(2.0)),
                         "--in", str(src), "--out", str(out))
        assert code == 0
        assert read_coefficients(out).get((1,)) == pytest.approx(0.5, rel=1e-15)

    def test_negative_time_is_domain_error(self, tmp_path, capsys):
        src = self.make_unit(tmp_path, n=(1,))
        code, _, _ = run(capsys, "propagate", "--time", "-1.0",
                         "--in", str(src), "--out", str(tmp_path / "o.txt"))
        assert code == 2


class TestNormsEtaClassify:
    def write_geometric(self, tmp_path, degree=40):
        entries = {(n,): geometric_coefficient(n) for n in range(degree + 1)}
        a = CoefficientField(1, "total", degree, entries)
        path = tmp_path / "geo.txt"
        write_coefficients(a, path)
        return path

    def test_norms_output(self, tmp_path, capsys):
        a = CoefficientField(1, "total", 5, {(5,): 1.0})
        path = tmp_path / "unit.txt"
        write_coefficients(a, path)
        code, out, _ = run(capsys, "norms", "--in", str(path),
                           "--alpha", "1.0", "--h", "2.0", "--p", "2")
        assert code == 0
        val = float(out.splitlines()[-1].split(": ")[1])
        assert val == pytest.approx(math.exp(2.0 * math.sqrt(5.0)), rel=1e-13)

    def test_norms_rejects_p_below_one(self, tmp_path, capsys):
        path = self.write_geometric(tmp_path)
        code, _, _ = run(capsys, "norms", "--in", str(path),
                         "--alpha", "1.0", "--h", "1.0", "--p", "0.5")
        assert code == 2

    def test_eta_output(self, tmp_path, capsys):
        a = CoefficientField(1, "total", 3, {(3,): 1.0})
        path = tmp_path / "e.txt"
        write_coefficients(a, path)
        code, out, _ = run(capsys, "eta", "--in", str(path),
                           "--alpha", "1.0", "--h", "1.0")
        assert code == 0
        fields = dict(line.split(": ") for line in out.splitlines())
        assert float(fields["value"]) == pytest.approx(4.5, rel=1e-12)
        assert fields["still_growing"] == "False"

    def test_classify_geometric_is_member(self, tmp_path, capsys):
        path = self.write_geometric(tmp_path, degree=120)
        code, out, _ = run(capsys, "classify", "--in", str(path), "--alpha", "1.0")
        assert code == 0
        fields = dict(line.split(": ", 1) for line in out.splitlines())
        assert fields["verdict"] in ("roumieu", "beurling")

    def test_missing_file_is_usage_error(self, capsys):
        code, _, _ = run(capsys, "classify", "--in", "/nonexistent.txt",
                         "--alpha", "1.0")
        assert code == 1


class TestVerify:
    def test_core_suite_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "core")
        assert code == 0
        assert "PASS" in out and "FAIL" not in out


class TestExitCodes:
    def test_no_command_is_usage(self, capsys):
        assert run(capsys, )[0] == 1

    def test_unknown_command_is_usage(self, capsys):
        assert run(capsys, "frobnicate")[0] == 1

    def test_missing_required_flag_is_usage(self, capsys):
        assert run(capsys, "quad")[0] == 1

    def test_bad_node_count_is_domain(self, capsys):
        assert run(capsys, "quad", "--nodes", "0")[0] == 2

    def test_version_exits_zero(self, capsys):
        code, out, _ = run(capsys, "--version")
        assert code == 0
        assert out.startswith("orthlag ")

"""Command-line interface: outputs, formats and exit codes."""

import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from jacobispec.cli import main
from jacobispec.problems import get_problem


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(line for line in io.StringIO(text) if not line.startswith("#")))


class TestQuadrature:
    def test_02_order_two(self, capsys):
        code, out, _ = run(capsys, "quadrature", "--alpha", "0", "--beta", "2", "--n", "2")
        assert code == 0
        r = rows(out)
        assert [float(x["node"]) for x in r] == pytest.approx([-1, 1 / 3, 1], abs=1e-15)
        assert [float(x["weight"]) for x in r] == pytest.approx([1 / 15, 9 / 5, 4 / 5], rel=1e-13)

    def test_chebyshev(self, capsys):
        _, out, _ = run(capsys, "quadrature", "--alpha", "-0.5", "--beta", "-0.5", "--n", "8")
        w = [float(x["weight"]) for x in rows(out)]
        assert w[1:-1] == pytest.approx([math.pi / 8] * 7, rel=1e-13)

    def test_order_one(self, capsys):
        _, out, _ = run(capsys, "quadrature", "--n", "1")
        assert [float(x["node"]) for x in rows(out)] == [-1.0, 1.0]

    def test_full_precision(self, capsys):
        _, out, _ = run(capsys, "quadrature", "--n", "2")
        assert rows(out)[1]["node"] == format(1 / 3, ".17g")

    def test_json(self, capsys):
        _, out, _ = run(capsys, "quadrature", "--n", "2", "--format", "json")
        doc = json.loads(out)
        assert len(doc["rows"]) == 3 and set(doc["rows"][0]) == {"i", "node", "weight"}

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "rule.csv"
        code, out, _ = run(capsys, "quadrature", "--n", "3", "-o", str(path))
        assert code == 0 and out == ""
        assert len(rows(path.read_text())) == 4


class TestTransform:
    def test_linear(self, capsys):
        code, out, _ = run(capsys, "transform", "--n", "1", "--values=-1,1")
        assert code == 0
        assert [float(x["coefficient"]) for x in rows(out)] == pytest.approx([0.5, 0.5], abs=1e-15)

    def test_values_file(self, capsys, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("1 1 1 1\n")
        _, out, _ = run(capsys, "transform", "--n", "3", "--values-file", str(p))
        assert [float(x["coefficient"]) for x in rows(out)] == pytest.approx([1, 0, 0, 0], abs=1e-13)

    def test_wrong_count(self, capsys):
        code, _, err = run(capsys, "transform", "--n", "3", "--values", "1,2")
        assert code == 1 and "expected 4" in err


class TestSolve:
    def test_zero(self, capsys):
        code, out, _ = run(capsys, "solve", "--source", "zero", "--nr", "9", "--no-timing")
        assert code == 0
        r = rows(out)
        assert [x["domain"] for x in r] == ["nucleus", "shell", "external"]
        assert all(float(x["error"]) == 0.0 and float(x["seconds"]) == 0.0 for x in r)
        assert out.splitlines()[0] == "N_r,domain,error,seconds"

    def test_uniform_ball(self, capsys):
        _, out, _ = run(capsys, "solve", "--source", "uniform-ball", "--nr", "17")
        assert float(rows(out)[0]["error"]) <= 1e-12

    def test_smooth(self, capsys):
        _, out, _ = run(capsys, "solve", "--source", "smooth", "--nr", "33")
        assert float(rows(out)[0]["error"]) <= 1e-9

    def test_file_source(self, capsys, tmp_path):
        grid = tmp_path / "grid.txt"
        assert run(capsys, "solve", "--write-grid", str(grid), "--nr", "9", "--n-theta", "5", "--n-phi", "4")[0] == 0
        table = np.loadtxt(grid)
        table[:, 3] = get_problem("smooth").source(table[:, 0], table[:, 1], table[:, 2])
        src = tmp_path / "src.txt"
        np.savetxt(src, table, fmt="%.17g")
        code, out, _ = run(capsys, "solve", "--source", "file", "--file", str(src), "--nr", "9", "--n-theta", "5", "--n-phi", "4")
        assert code == 0
        got = np.loadtxt(io.StringIO(out))
        assert got.shape == table.shape
        ref = get_problem("smooth").solution(got[:, 0], got[:, 1], got[:, 2])
        assert np.max(np.abs(got[:, 3] - ref)) < 1e-2

    def test_file_source_mismatch(self, capsys, tmp_path):
        src = tmp_path / "bad.txt"
        src.write_text("1 0 0 1\n")
        code, _, err = run(capsys, "solve", "--source", "file", "--file", str(src), "--nr", "9")
        assert code == 1 and "rows" in err

    def test_file_source_requires_path(self, capsys):
        assert run(capsys, "solve", "--source", "file")[0] == 1

    def test_bad_nr(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--nr", "5"])
        assert exc.value.code == 1


class TestConverge:
    def test_deterministic_without_timing(self, capsys):
        argv = ["converge", "--source", "smooth", "--nr", "9,13", "--basis", "both", "--no-timing"]
        first = run(capsys, *argv)[1]
        second = run(capsys, *argv)[1]
        assert first == second
        labels = [x["domain"] for x in rows(first)]
        assert labels[0] == "nucleus@chebyshev" and "external@jacobi02" in labels

    def test_rate_lines(self, capsys):
        _, out, _ = run(capsys, "converge", "--source", "sqrt", "--nr", "9,13,17", "--no-timing")
        trailer = [line for line in out.splitlines() if line.startswith("#")]
        assert len(trailer) == 1 and trailer[0].startswith("# algebraic_rate[jacobi02]: ")

    def test_json_rates(self, capsys):
        _, out, _ = run(capsys, "converge", "--source", "smooth", "--nr", "9,13", "--format", "json")
        doc = json.loads(out)
        assert doc["exponential_rate[jacobi02]"] > 0
        assert [r["N_r"] for r in doc["rows"]] == [9, 9, 9, 13, 13, 13]

    @pytest.mark.parametrize("nr", ["13,9", "9,9", "4,9", "a,b", ""])
    def test_invalid_lists(self, nr):
        with pytest.raises(SystemExit) as exc:
            main(["converge", "--nr", nr])
        assert exc.value.code == 1


class TestSelftest:
    def test_single_suite(self, capsys):
        code, out, _ = run(capsys, "selftest", "--suite", "weights")
        assert code == 0
        assert out.startswith("PASS weights")

    def test_repeatable_filter(self, capsys):
        code, out, _ = run(capsys, "selftest", "--suite", "links", "--suite", "weights")
        assert code == 0
        assert [line.split()[1] for line in out.splitlines() if line[:4] in ("PASS", "FAIL")] == ["links", "weights"]

    def test_perturbed_weight_fails(self, capsys):
        code, out, _ = run(capsys, "selftest", "--suite", "weights", "--perturb-weight", "1e-6")
        assert code == 2
        assert "FAIL weights" in out and "weight sums" in out

    def test_verbose(self, capsys):
        _, out, _ = run(capsys, "selftest", "--suite", "links", "-v")
        assert "ok: Legendre link" in out

    def test_unknown_suite(self):
        with pytest.raises(SystemExit) as exc:
            main(["selftest", "--suite", "nope"])
        assert exc.value.code == 1


def test_no_subcommand():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "jacobispec", "quadrature", "--n", "2"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "i,node,weight"

"""Integration tests for the command-line interface.

Exit codes and file outputs of solve, gen, verify and bench.
"""

import pandas as pd
import pytest

from potsolver.__main__ import EXIT_ERROR, EXIT_NO, EXIT_OK, EXIT_YES, run
from potsolver.formats import format_instance, parse_instance, parse_model
from potsolver.network import Instance, verify_model


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Run every command from an empty directory with built-in defaults."""
    monkeypatch.delenv("POTSOLVER_CONFIG", raising=False)
    monkeypatch.chdir(tmp_path)


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestSolveCommand:
    """Test cases for 'potsolver solve'."""

    def test_tasks_yes(self, fixtures_dir, tmp_path, capsys):
        """Test exit 10 and a verifying model file."""
        model_path = tmp_path / "tasks.model"
        code = run(["solve", "--input", str(fixtures_dir / "tasks.pot"), "--model-out", str(model_path)])
        assert code == EXIT_YES
        assert capsys.readouterr().out == "s yes\n"
        ins = parse_instance((fixtures_dir / "tasks.pot").read_bytes())
        assert verify_model(ins, parse_model(model_path.read_text()))

    def test_model_on_stdout(self, fixtures_dir, capsys):
        """Test the model goes to stdout without --model-out."""
        assert run(["solve", "--input", str(fixtures_dir / "tasks.pot")]) == EXIT_YES
        out = capsys.readouterr().out
        assert out.startswith("s yes\nq 0 ")

    def test_antisymmetry_no(self, tmp_path, capsys):
        """Test exit 20 for x<y and y<x."""
        path = write(tmp_path / "bad.pot", "p pot 2 2\nc 0 1 <\nc 1 0 <\n")
        for algo in ("ptop", "total", "brute"):
            assert run(["solve", "--algo", algo, "--input", path]) == EXIT_NO
        assert capsys.readouterr().out.splitlines()[0] == "s no"

    def test_brute_guard(self, tmp_path, capsys):
        """Test brute force on 20 variables exits 1 with the guard message."""
        path = write(tmp_path / "big.pot", format_instance(Instance(20)))
        assert run(["solve", "--algo", "brute", "--input", path]) == EXIT_ERROR
        assert "brute force is limited" in capsys.readouterr().err

    def test_zero_threads(self, fixtures_dir, capsys):
        """Test an explicit --threads 0 exits 1 instead of falling back to the config."""
        assert run(["solve", "--input", str(fixtures_dir / "tasks.pot"), "--threads", "0"]) == EXIT_ERROR
        assert "threads must be positive" in capsys.readouterr().err

    def test_stats_lines(self, fixtures_dir, capsys):
        """Test --stats prints key=value lines after the model."""
        assert run(["solve", "--input", str(fixtures_dir / "tasks.pot"), "--stats"]) == EXIT_YES
        lines = capsys.readouterr().out.splitlines()
        keys = [line.split("=")[0] for line in lines if "=" in line]
        assert keys == [
            "leaves",
            "greedy_steps",
            "rule2_fires",
            "rule3_fires",
            "rule4_fires",
            "millis",
            "verification_failures",
        ]

    def test_explain(self, fixtures_dir, capsys):
        """Test --explain lists links and chains of the first scaffold."""
        run(["solve", "--input", str(fixtures_dir / "five_pairs.pot"), "--explain", "--model-out", "out.model"])
        lines = capsys.readouterr().out.splitlines()
        assert sum(line.startswith("L: ") for line in lines) == 8
        assert sum(line.startswith("C: ") for line in lines) == 2

    def test_missing_file(self, capsys):
        """Test an unreadable input exits 1."""
        assert run(["solve", "--input", "nope.pot"]) == EXIT_ERROR
        assert capsys.readouterr().err.startswith("error: ")

    def test_parse_error(self, tmp_path, capsys):
        """Test a malformed instance exits 1 with its line number."""
        path = write(tmp_path / "bad.pot", "p pot 3 1\nc 0 0 <\n")
        assert run(["solve", "--input", path]) == EXIT_ERROR
        assert "line 2" in capsys.readouterr().err

    def test_bad_flag(self):
        """Test an unknown algorithm flag exits 1."""
        assert run(["solve", "--algo", "sat", "--input", "x.pot"]) == EXIT_ERROR

    def test_strict_determinism_is_reproducible(self, fixtures_dir, capsys):
        """Test two strict runs print identical output."""
        args = ["solve", "--input", str(fixtures_dir / "tasks.pot"), "--threads", "2", "--strict-determinism"]
        run(args)
        first = capsys.readouterr().out
        run(args)
        assert capsys.readouterr().out == first


class TestGenCommand:
    """Test cases for 'potsolver gen'."""

    def test_planted_with_model(self, tmp_path):
        """Test planted n=6 seed=42 writes an instance and a verifying model."""
        out = tmp_path / "p6.pot"
        assert run(["gen", "--n", "6", "--seed", "42", "--mode", "planted", "-o", str(out)]) == EXIT_OK
        ins = parse_instance(out.read_bytes())
        model = parse_model((tmp_path / "p6.pot.model").read_bytes())
        assert ins.n == 6
        assert verify_model(ins, model)
        assert run(["verify", "--input", str(out), "--model", str(tmp_path / "p6.pot.model")]) == EXIT_OK

    def test_reproducible(self, tmp_path):
        """Test the same flags produce identical bytes."""
        a, b = tmp_path / "a.pot", tmp_path / "b.pot"
        for path in (a, b):
            run(["gen", "--n", "9", "--density", "0.4", "--seed", "5", "-o", str(path)])
        assert a.read_bytes() == b.read_bytes()
        assert a.read_text().startswith("# potsolver gen mode=uniform n=9 density=0.4 seed=5\n")

    def test_density_out_of_range(self, tmp_path):
        """Test density 2.0 exits 1."""
        assert run(["gen", "--n", "4", "--density", "2.0", "-o", str(tmp_path / "x.pot")]) == EXIT_ERROR


class TestVerifyCommand:
    """Test cases for 'potsolver verify'."""

    def test_tasks_model(self, fixtures_dir):
        """Test the bundled model verifies."""
        args = ["verify", "--input", str(fixtures_dir / "tasks.pot"), "--model", str(fixtures_dir / "tasks.model")]
        assert run(args) == EXIT_OK

    def test_merged_model(self, fixtures_dir, tmp_path):
        """Test one class for all tasks exits 20."""
        model = write(tmp_path / "m", "s yes\nq 0 0\nq 1 0\nq 2 0\n")
        assert run(["verify", "--input", str(fixtures_dir / "tasks.pot"), "--model", model]) == EXIT_NO

    @pytest.mark.parametrize("text", ["", "s yes\nq 0 0\n", "s yes\nq 0 0\nq 1 1\nq 2", "s no\n"])
    def test_unusable_model(self, fixtures_dir, tmp_path, text):
        """Test truncated, undersized and 's no' model files exit 1."""
        model = write(tmp_path / "m", text)
        assert run(["verify", "--input", str(fixtures_dir / "tasks.pot"), "--model", model]) == EXIT_ERROR


class TestBenchCommand:
    """Test cases for 'potsolver bench'."""

    def test_csv(self, tmp_path, capsys):
        """Test one row per (algo, instance) with the fixed columns."""
        csv = tmp_path / "bench.csv"
        args = ["bench", "--algos", "ptop,total,brute", "--sizes", "3..4", "--per-size", "2", "--csv", str(csv)]
        assert run(args) == EXIT_OK
        frame = pd.read_csv(csv, keep_default_na=False)
        assert list(frame.columns) == ["algo", "n", "seed", "instance", "verdict", "leaves", "millis", "timeout"]
        assert len(frame) == 12
        assert set(frame["verdict"]) <= {"yes", "no"}
        for _, group in frame.groupby(["n", "instance"]):
            assert group["verdict"].nunique() == 1
        assert "leaf_ratio" in capsys.readouterr().out

    def test_empty_size_range(self, tmp_path):
        """Test 5..4 exits 1."""
        assert run(["bench", "--sizes", "5..4", "--csv", str(tmp_path / "x.csv")]) == EXIT_ERROR

    def test_brute_size_guard(self, tmp_path):
        """Test brute force beyond its guard exits 1."""
        args = ["bench", "--algos", "brute", "--sizes", "9..9", "--csv", str(tmp_path / "x.csv")]
        assert run(args) == EXIT_ERROR

    def test_timeout_row(self, tmp_path):
        """Test a hit deadline gives timeout=1 and an empty verdict."""
        csv = tmp_path / "t.csv"
        args = [
            "bench", "--algos", "total", "--sizes", "9..9", "--per-size", "1",
            "--density", "0.9", "--timeout-ms", "0.001", "--csv", str(csv),
        ]
        assert run(args) == EXIT_OK
        frame = pd.read_csv(csv, keep_default_na=False)
        assert frame.loc[0, "timeout"] == 1
        assert frame.loc[0, "verdict"] == ""

    @pytest.mark.parametrize("flag", ["--timeout-ms", "--per-size"])
    def test_zero_override(self, tmp_path, capsys, flag):
        """Test an explicit zero exits 1 instead of falling back to the config."""
        args = ["bench", "--sizes", "3..3", flag, "0", "--csv", str(tmp_path / "x.csv")]
        assert run(args) == EXIT_ERROR
        assert "must be positive" in capsys.readouterr().err

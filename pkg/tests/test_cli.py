"""Tests for src/cli/hodge_cli.py"""

import json
from unittest.mock import patch

import pytest

from src.cli.hodge_cli import EXIT_DOMAIN, EXIT_MISMATCH, EXIT_OK, EXIT_PARSE, EXIT_SMOOTHNESS, build_parser, main
from src.fixtures import FixtureResult

POINT_PROBLEM = """\
[ring]
nvars = 2
d = 3

[hypersurface]
F = x0^3 + x1^3

[cycle Z]
construction = point
r = z(6)

[task]
operation = hilbert_function
cycle = Z

[task]
operation = is_artinian_gorenstein
cycle = Z
"""

SINGULAR_PROBLEM = """\
[ring]
nvars = 2
d = 3

[hypersurface]
F = x0^2*x1

[cycle R]
construction = raw
P = x0

[task]
operation = hilbert_function
cycle = R
"""

ZERO_PROBLEM = """\
[ring]
nvars = 2
d = 3

[hypersurface]
F = x0^3 + x1^3

[cycle R]
construction = raw
P = 0

[task]
operation = hilbert_function
cycle = R
"""


def _lines(out: str) -> list[dict]:
    return [json.loads(line) for line in out.splitlines() if line.strip()]


@pytest.mark.integration
class TestCompute:
    """Tests for the compute subcommand."""

    def test_prints_reports(self, problem_file, capsys):
        """One JSON line per task, in task order."""
        code = main(["compute", str(problem_file(POINT_PROBLEM))])
        assert code == EXIT_OK
        reports = _lines(capsys.readouterr().out)
        assert [r["operation"] for r in reports] == ["hilbert_function", "is_artinian_gorenstein"]
        assert reports[0]["result"]["hilbert"] == [1, 1, 0]
        assert reports[1]["result"]["passed"] is True

    def test_writes_report_files(self, problem_file, temp_dir, capsys):
        """--out writes numbered report files."""
        out_dir = temp_dir / "out"
        code = main(["compute", str(problem_file(POINT_PROBLEM)), "--out", str(out_dir)])
        assert code == EXIT_OK
        first = out_dir / "001-hilbert_function.json"
        assert first.exists()
        assert (out_dir / "002-is_artinian_gorenstein.json").exists()
        data = json.loads(first.read_text(encoding="utf-8"))
        assert data["result"]["hilbert"] == [1, 1, 0]
        assert str(first) in capsys.readouterr().out

    def test_sample_by_name(self, capsys):
        """Bare names resolve against the sample problems directory."""
        assert main(["compute", "fermat-cubic-point.txt"]) == EXIT_OK
        reports = _lines(capsys.readouterr().out)
        assert reports[0]["result"]["hilbert"] == [1, 1, 0]

    def test_out_defaults_to_output_dir(self, problem_file, test_config, capsys):
        """--out without a directory writes to the configured output_dir."""
        with patch("src.cli.hodge_cli.get_config", return_value=test_config):
            code = main(["compute", str(problem_file(POINT_PROBLEM)), "--out"])
        assert code == EXIT_OK
        assert (test_config.output_dir / "001-hilbert_function.json").exists()

    def test_parallel_flag(self, problem_file, capsys):
        """--parallel keeps the task order."""
        code = main(["compute", str(problem_file(POINT_PROBLEM)), "--parallel"])
        assert code == EXIT_OK
        reports = _lines(capsys.readouterr().out)
        assert [r["operation"] for r in reports] == ["hilbert_function", "is_artinian_gorenstein"]

    def test_repeated_runs_byte_identical(self, capsys):
        """Two runs on the same file print the same bytes."""
        assert main(["compute", "fermat-cubic-point.txt"]) == EXIT_OK
        first = capsys.readouterr().out
        assert main(["compute", "fermat-cubic-point.txt"]) == EXIT_OK
        assert capsys.readouterr().out == first
        assert "elapsed" not in first

    def test_timing_flag(self, problem_file, capsys):
        """--timing adds elapsed seconds to every report."""
        assert main(["compute", str(problem_file(POINT_PROBLEM)), "--timing"]) == EXIT_OK
        reports = _lines(capsys.readouterr().out)
        assert all(r["elapsed"] >= 0 for r in reports)

    def test_singular_fake_point(self, problem_file):
        """A singular form exits 3 even when a cycle needs its roots."""
        text = SINGULAR_PROBLEM.replace("construction = raw\nP = x0", "construction = fake_point\nc = 1")
        assert main(["compute", str(problem_file(text))]) == EXIT_SMOOTHNESS

    def test_missing_file(self, temp_dir, capsys):
        """A missing problem file exits with the parse code."""
        code = main(["compute", str(temp_dir / "nope.txt")])
        assert code == EXIT_PARSE
        assert "Error:" in capsys.readouterr().err

    def test_parse_error(self, problem_file, capsys):
        """Malformed problem files exit with code 2."""
        path = problem_file(POINT_PROBLEM.replace("d = 3", "d = three"))
        assert main(["compute", str(path)]) == EXIT_PARSE
        assert "line 3" in capsys.readouterr().err

    def test_singular_hypersurface(self, problem_file):
        """A failed smoothness certificate exits with code 3."""
        assert main(["compute", str(problem_file(SINGULAR_PROBLEM))]) == EXIT_SMOOTHNESS

    def test_domain_error(self, problem_file, capsys):
        """Other domain errors exit with code 4."""
        assert main(["compute", str(problem_file(ZERO_PROBLEM))]) == EXIT_DOMAIN
        assert "Error:" in capsys.readouterr().err


@pytest.mark.integration
class TestVerify:
    """Tests for the verify subcommand."""

    def test_passing_fixture(self, capsys):
        """A passing fixture exits 0 and prints its result."""
        code = main(["verify", "binary-determinant-witness", "--d", "4", "--alpha0", "3", "--r", "1", "--rcheck", "2"])
        assert code == EXIT_OK
        (result,) = _lines(capsys.readouterr().out)
        assert result["fixture"] == "binary-determinant-witness"
        assert result["passed"] is True

    def test_failing_fixture(self, capsys):
        """A mismatch exits with code 5 and names the failed check."""
        failed = FixtureResult("fermat-point-colon", "demo")
        failed.check("generators", False)
        with patch("src.cli.hodge_cli.run_fixture", return_value=failed):
            code = main(["verify", "fermat-point-colon"])
        assert code == EXIT_MISMATCH
        assert "generators" in capsys.readouterr().err

    def test_unknown_fixture(self):
        """argparse rejects unknown fixture ids."""
        with pytest.raises(SystemExit) as exc_info:
            build_parser().parse_args(["verify", "no-such-fixture"])
        assert exc_info.value.code == 2


@pytest.mark.integration
class TestExploreFake:
    """Tests for the explore-fake subcommand."""

    def test_rows_and_collisions(self, capsys):
        """Each c gives a row; roots give an error row."""
        code = main(["explore-fake", "--roots", "0,1,-1", "--c", "2,1"])
        assert code == EXIT_OK
        fake, collision = _lines(capsys.readouterr().out)
        assert fake["c"] == "2"
        assert fake["hilbert"] == [1, 1, 0]
        assert fake["verdict"] == "FakeLinear"
        assert len(fake["coefficients"]) == 2
        assert collision["c"] == "1"
        assert "error" in collision

    def test_join_with_fermat_point(self, capsys):
        """--join adds the Hilbert function and verdict of the joined cycle."""
        code = main(["explore-fake", "--roots", "0,1,-1", "--c", "2", "--join", "--n", "2"])
        assert code == EXIT_OK
        (row,) = _lines(capsys.readouterr().out)
        assert row["join_hilbert"] == [1, 2, 1, 0]
        assert row["join_verdict"] == "FakeLinear"
        assert "certificate" not in row

    def test_degree_must_match_roots(self):
        """--d must equal the number of roots."""
        assert main(["explore-fake", "--roots", "0,1,-1", "--c", "2", "--d", "4"]) == EXIT_PARSE

    def test_odd_dimension_rejected(self):
        """--n must be even."""
        assert main(["explore-fake", "--roots", "0,1,-1", "--c", "2", "--join", "--n", "3"]) == EXIT_PARSE

    def test_irrational_root_rejected(self):
        """--roots takes rational numbers only."""
        assert main(["explore-fake", "--roots", "0,z(6),1", "--c", "2"]) == EXIT_PARSE

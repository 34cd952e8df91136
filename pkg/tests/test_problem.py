"""Tests for src/problem.py"""

import pytest

from src.config import get_config
from src.errors import ParseError, RootMismatch, SmoothnessFailure, ZeroClass
from src.jacobian import HypersurfaceSpec
from src.polyring import Polynomial, fermat_form, parse_polynomial
from src.problem import OPERATIONS, Entry, load_problem, parse_problem, run_problem, run_task

CUBIC_POINT = """\
[ring]
nvars = 2
d = 3   # cubic
order = grevlex

[hypersurface]
F = x0^3 + x1^3

[cycle Z]
construction = point
r = z(6)

[task]
operation = hilbert_function
cycle = Z
"""

JOINED_POINTS = """\
[ring]
d = 3

[hypersurface]
F = x0^3 + x1^3 + x2^3 + x3^3

[hypersurface line]
F = x0^3 + x1^3

[cycle A]
construction = point
on = line
r = z(6)

[cycle B]
construction = join
left = A
right = A

[cycle L]
construction = linear
c = z(6), z(6)

[cycle M]
construction = linear
c = z(6), -1

[task]
operation = hilbert_function
cycle = B

[task]
operation = ideal_equal
cycle = L
other = M

[task]
operation = is_fake_linear
cycle = L
"""

SPLIT_CUBIC = """\
[ring]
nvars = 2
d = 3

[hypersurface]
F = x0^3 - x0*x1^2

[cycle fake]
construction = fake_point
c = 2

[cycle p0]
construction = point
r = 0

[cycle p1]
construction = point
r = 1

[cycle mix]
construction = combination
parts = p0:2, p1

[task]
operation = express_in_point_basis
cycle = fake

[task]
operation = is_fake_linear
cycle = fake

[task]
operation = qff_pair
cycle = fake
G = x0 - 2*x1

[task]
operation = hilbert_function
cycle = mix

[task]
operation = quotient_presentation
cycle = p0
degree = 1
"""

SINGULAR = """\
[ring]
nvars = 2
d = 3

[hypersurface]
F = x0^2*x1

[cycle R]
construction = raw
P = x0

[task]
operation = {operation}
{extra}
"""


def _results(text: str, **kwargs) -> list[dict]:
    return [report.result for report in run_problem(parse_problem(text), **kwargs)]


class TestEntry:
    """Tests for Entry column bookkeeping."""

    def test_split_keeps_columns(self):
        """Pieces of a comma list keep their own columns."""
        pieces = Entry("a, bb,c", 3, 10).split(",")
        assert [p.value for p in pieces] == ["a", "bb", "c"]
        assert [p.column for p in pieces] == [10, 13, 16]

    def test_error_is_one_based(self):
        """Errors report the 1-based column."""
        error = Entry("x", 2, 4).error("bad")
        assert (error.line, error.column) == (2, 5)


class TestParseStructure:
    """Tests for block and entry parsing."""

    def test_parses_blocks(self):
        """Hypersurfaces, cycles and tasks are collected."""
        problem = parse_problem(CUBIC_POINT)
        assert problem.order == "grevlex"
        assert set(problem.hypersurfaces) == {"main"}
        assert set(problem.cycles) == {"Z"}
        assert [t.operation for t in problem.tasks] == ["hilbert_function"]

    def test_unknown_key(self):
        """Unknown keys report line and column."""
        text = CUBIC_POINT.replace("order = grevlex", "colour = red")
        with pytest.raises(ParseError) as exc_info:
            parse_problem(text)
        assert exc_info.value.line == 4
        assert exc_info.value.column == 1

    def test_unknown_block(self):
        """Unknown block kinds are rejected."""
        with pytest.raises(ParseError) as exc_info:
            parse_problem("[surface]\nF = x0^3\n")
        assert exc_info.value.line == 1

    def test_entry_outside_block(self):
        """Entries before the first block are rejected."""
        with pytest.raises(ParseError):
            parse_problem("d = 3\n" + CUBIC_POINT)

    def test_duplicate_key(self):
        """A key may appear once per block."""
        with pytest.raises(ParseError) as exc_info:
            parse_problem(CUBIC_POINT.replace("d = 3   # cubic", "d = 3\nd = 3"))
        assert exc_info.value.line == 4

    def test_empty_value(self):
        """A key needs a value."""
        with pytest.raises(ParseError):
            parse_problem(CUBIC_POINT.replace("order = grevlex", "order ="))

    def test_unknown_operation(self):
        """Unknown operation names point at the value."""
        text = CUBIC_POINT.replace("operation = hilbert_function", "operation = frobnicate")
        with pytest.raises(ParseError) as exc_info:
            parse_problem(text)
        assert exc_info.value.line == 14
        assert exc_info.value.column == 13

    def test_unknown_order(self):
        """Monomial orders must be known."""
        with pytest.raises(ParseError):
            parse_problem(CUBIC_POINT.replace("order = grevlex", "order = weird"))

    def test_bad_polynomial_column(self):
        """Polynomial errors are reported in file columns."""
        text = CUBIC_POINT.replace("F = x0^3 + x1^3", "F = x0^3 + $x1^3")
        with pytest.raises(ParseError) as exc_info:
            parse_problem(text)
        assert exc_info.value.line == 7
        assert exc_info.value.column == 12

    def test_degree_must_match_ring(self):
        """F must have the declared degree."""
        with pytest.raises(ParseError):
            parse_problem(CUBIC_POINT.replace("F = x0^3 + x1^3", "F = x0^4 + x1^4"))

    def test_missing_hypersurface(self):
        """The main hypersurface is required."""
        with pytest.raises(ParseError):
            parse_problem("[ring]\nd = 3\n")

    def test_two_rings(self):
        """Exactly one [ring] block is allowed."""
        with pytest.raises(ParseError):
            parse_problem("[ring]\nd = 3\n" + CUBIC_POINT)

    def test_unnamed_cycle(self):
        """[cycle] blocks need a name."""
        with pytest.raises(ParseError):
            parse_problem(CUBIC_POINT.replace("[cycle Z]", "[cycle]"))

    def test_unknown_construction(self):
        """Constructions come from a fixed list."""
        with pytest.raises(ParseError):
            parse_problem(CUBIC_POINT.replace("construction = point", "construction = cone"))

    def test_point_must_be_root(self):
        """A point parameter that is not a root is a domain error."""
        with pytest.raises(RootMismatch):
            parse_problem(CUBIC_POINT.replace("r = z(6)", "r = 2"))

    def test_load_problem(self, problem_file):
        """load_problem reads from disk."""
        problem = load_problem(problem_file(CUBIC_POINT))
        assert problem.tasks[0].echo()["params"] == {"cycle": "Z"}


class TestRunProblem:
    """Tests for task execution."""

    def test_point_hilbert(self):
        """A point on the cubic curve has Hilbert function 1, 1, 0."""
        (result,) = _results(CUBIC_POINT)
        assert result == {"hilbert": [1, 1, 0], "socle_degree": 1}

    def test_surface_tasks(self):
        """Joins and linear cycles on the Fermat cubic surface."""
        hilbert, equal, verdict = _results(JOINED_POINTS)
        assert hilbert["hilbert"] == [1, 2, 1, 0]
        assert equal["equal"] is False
        assert verdict["verdict"] == "Linear"

    def test_split_cubic_tasks(self):
        """Fake points, combinations and presentations on a rational-root cubic."""
        basis, verdict, pair, mix, presentation = _results(SPLIT_CUBIC)
        assert basis["roots"] == ["-1", "0", "1"]
        assert len(basis["coefficients"]) == 2
        assert verdict["verdict"] == "FakeLinear"
        assert pair["representative"] == "-18"
        assert pair["is_zero"] is False
        assert mix["hilbert"] == [1, 1, 0]
        assert len(presentation["standard_monomials"]) == 1

    def test_reports_carry_inputs(self):
        """Each report echoes its task."""
        (report,) = run_problem(parse_problem(CUBIC_POINT))
        assert report.operation == "hilbert_function"
        assert report.inputs["line"] == 13
        assert report.elapsed is None

    def test_parallel_keeps_order(self):
        """Parallel execution returns reports in task order."""
        problem = parse_problem(JOINED_POINTS)
        reports = run_problem(problem, parallel=True, workers=3)
        assert [r.operation for r in reports] == ["hilbert_function", "ideal_equal", "is_fake_linear"]
        assert [r.result for r in reports] == _results(JOINED_POINTS)

    def test_singular_hypersurface_stops_run(self):
        """Colon computations on a singular form raise SmoothnessFailure."""
        text = SINGULAR.format(operation="hilbert_function", extra="cycle = R")
        with pytest.raises(SmoothnessFailure):
            run_problem(parse_problem(text))

    def test_singular_hypersurface_inspection(self):
        """Smoothness-free operations run on singular input."""
        text = SINGULAR.format(operation="smoothness_check", extra="")
        (result,) = _results(text)
        assert result["smooth"] is False

    def test_singular_form_rejected_before_cycles(self):
        """Smoothness is certified before cycle constructions that need roots."""
        text = SINGULAR.replace("construction = raw\nP = x0", "construction = fake_point\nc = 1")
        text = text.format(operation="hilbert_function", extra="cycle = R")
        with pytest.raises(SmoothnessFailure):
            parse_problem(text)

    def test_repeated_runs_identical(self):
        """Reports depend only on the problem text."""
        first = [r.to_dict() for r in run_problem(parse_problem(JOINED_POINTS))]
        second = [r.to_dict() for r in run_problem(parse_problem(JOINED_POINTS), parallel=True, workers=2)]
        assert first == second
        assert len({r["id"] for r in first}) == len(first)
        assert all("elapsed" not in r for r in first)

    def test_timing_adds_elapsed(self):
        """timing=True records wall-clock seconds."""
        (report,) = run_problem(parse_problem(CUBIC_POINT), timing=True)
        assert report.elapsed is not None
        assert report.elapsed >= 0

    def test_unknown_cycle_reference(self):
        """Tasks must name defined cycles."""
        text = CUBIC_POINT.replace("cycle = Z", "cycle = W")
        with pytest.raises(ParseError) as exc_info:
            run_problem(parse_problem(text))
        assert exc_info.value.line == 15

    def test_zero_combination(self):
        """A combination that cancels in R^F raises ZeroClass."""
        text = SPLIT_CUBIC.replace("parts = p0:2, p1", "parts = p0:1, p0:-1")
        with pytest.raises(ZeroClass):
            parse_problem(text)

    def test_missing_task_key(self):
        """Operations report missing keys."""
        problem = parse_problem(CUBIC_POINT.replace("cycle = Z\n", ""))
        with pytest.raises(ParseError):
            run_task(problem, problem.tasks[0])

    def test_every_operation_registered(self):
        """The operation table covers the documented surface."""
        assert len(OPERATIONS) == 17


class TestSampleProblems:
    """The sample problems shipped under problems/."""

    @pytest.fixture
    def problems_dir(self):
        return get_config().problems_dir

    def test_samples_parse(self, problems_dir):
        """Every sample parses."""
        paths = sorted(problems_dir.glob("*.txt"))
        assert len(paths) >= 4
        for path in paths:
            assert load_problem(path).tasks

    def test_rational_sextic(self, problems_dir):
        """The fake point c = -1 has the recorded point-basis coefficients."""
        reports = run_problem(load_problem(problems_dir / "rational-sextic.txt"))
        assert reports[0].result["coefficients"] == ["2", "-3/2", "-1/3", "3/5", "1/4"]

    def test_cubic_surface_join(self, problems_dir):
        """Join, linear cycle and Jacobian-ideal tasks on the cubic surface."""
        results = [r.result for r in run_problem(load_problem(problems_dir / "cubic-surface-join.txt"))]
        hilbert, verdict, tensor, vanishing, koszul, member, hessian = results
        assert hilbert["hilbert"] == [1, 2, 1, 0]
        assert verdict["verdict"] == "Linear"
        assert tensor["holds"] is True
        assert vanishing["vanishes"] is True
        components = [parse_polynomial(text, 4) for text in koszul["components"]]
        partials = HypersurfaceSpec(fermat_form(4, 3)).partials
        total = sum((q * f for q, f in zip(components, partials)), Polynomial.zero(4))
        assert total == parse_polynomial("3*x0^2*x1 + 3*x2^2*x3", 4)
        assert member["member"] is True
        assert hessian["hessian"] == "1296*x0*x1*x2*x3"

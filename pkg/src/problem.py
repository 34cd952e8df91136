"""Problem files: hand-written ``key = value`` blocks describing a computation.

A problem file has one ``[ring]`` block, a main ``[hypersurface]`` block,
optional named ``[hypersurface NAME]`` blocks for join factors, any number of
``[cycle NAME]`` blocks, and ``[task]`` blocks run in file order::

    [ring]
    nvars = 2
    d = 3
    order = grevlex

    [hypersurface]
    F = x0^3 + x1^3

    [cycle Z]
    construction = point
    r = z(6)

    [task]
    operation = hilbert_function
    cycle = Z

Lines starting with ``#`` are comments. Errors carry the line and column of
the offending value.
"""

from __future__ import annotations

import logging
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import repeat
from pathlib import Path
from typing import Any, Callable

from src.config import MONOMIAL_ORDERS, get_config
from src.cycles import (
    CycleSpec,
    combination_poly,
    express_in_point_basis,
    fake_point_poly,
    is_fake_linear,
    join_poly,
    join_spec,
    linear_cycle_poly,
    point_poly,
    rational_roots,
    raw_cycle,
    verify_tensor_decomposition,
)
from src.errors import ParseError
from src.exactfield import FieldElement, format_field, is_rational
from src.jacobian import (
    HypersurfaceSpec,
    colon_piece,
    hessian_det,
    hilbert_function,
    ideal_equal,
    ideal_piece,
    is_artinian_gorenstein,
    membership,
    quotient_presentation,
)
from src.models.report import Report
from src.polyring import Polynomial, monomial_text, parse_field_element, parse_polynomial
from src.qform import fake_point_certificate, koszul_decompose, qff_pair, qff_vanishes_on_degree, two_point_witness

logger = logging.getLogger(__name__)

MAIN = "main"

_SECTION = re.compile(r"^\[\s*(?P<kind>[A-Za-z_]+)(?:\s+(?P<name>[A-Za-z_][A-Za-z0-9_]*))?\s*\]$")
_ENTRY = re.compile(r"^(?P<key>[A-Za-z_][A-Za-z0-9_]*)\s*=\s*")

ALLOWED_KEYS = {
    "ring": {"nvars", "d", "order"},
    "hypersurface": {"F", "nvars"},
    "cycle": {"construction", "on", "c", "r", "P", "left", "right", "parts"},
    "task": {
        "operation", "cycle", "other", "degree", "G", "H", "A", "Q", "gens", "roots",
        "hypersurface", "factors", "c", "left", "right", "method", "workers",
        "d", "alpha0", "r", "rcheck",
    },
}
CONSTRUCTIONS = ("linear", "point", "fake_point", "raw", "join", "combination")


@dataclass(frozen=True)
class Entry:
    """One ``key = value`` line; ``column`` is the 0-based offset of the value."""

    value: str
    line: int
    column: int

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.column + 1)

    def split(self, separator: str = ",") -> list["Entry"]:
        pieces = []
        start = 0
        for part in self.value.split(separator):
            stripped = part.strip()
            if stripped:
                offset = start + (len(part) - len(part.lstrip()))
                pieces.append(Entry(stripped, self.line, self.column + offset))
            start += len(part) + len(separator)
        return pieces


@dataclass
class Section:
    kind: str
    name: str | None
    line: int
    entries: dict[str, Entry] = field(default_factory=dict)

    def get(self, key: str) -> Entry | None:
        return self.entries.get(key)

    def require(self, key: str) -> Entry:
        entry = self.entries.get(key)
        if entry is None:
            title = self.kind if self.name is None else f"{self.kind} {self.name}"
            raise ParseError(f"[{title}] needs '{key}'", self.line)
        return entry


@dataclass(frozen=True)
class NamedCycle:
    name: str
    spec: HypersurfaceSpec
    cycle: CycleSpec


@dataclass
class TaskSpec:
    """A parsed ``[task]`` block."""

    operation: str
    entries: dict[str, Entry]
    line: int

    def echo(self) -> dict[str, Any]:
        return {
            "operation": self.operation,
            "line": self.line,
            "params": {k: e.value for k, e in self.entries.items() if k != "operation"},
        }

    def get(self, key: str) -> Entry | None:
        return self.entries.get(key)

    def require(self, key: str) -> Entry:
        entry = self.entries.get(key)
        if entry is None:
            raise ParseError(f"Task '{self.operation}' needs '{key}'", self.line)
        return entry


@dataclass
class Problem:
    order: str
    hypersurfaces: dict[str, HypersurfaceSpec]
    cycles: dict[str, NamedCycle]
    tasks: list[TaskSpec]

    def hypersurface(self, entry: Entry | None) -> HypersurfaceSpec:
        name = MAIN if entry is None else entry.value
        if name not in self.hypersurfaces:
            raise ParseError(f"Unknown hypersurface '{name}'", *_location(entry))
        return self.hypersurfaces[name]

    def cycle(self, entry: Entry) -> NamedCycle:
        if entry.value not in self.cycles:
            raise entry.error(f"Unknown cycle '{entry.value}'")
        return self.cycles[entry.value]


def _location(entry: Entry | None) -> tuple[int | None, int | None]:
    if entry is None:
        return None, None
    return entry.line, entry.column + 1


# -- value parsing -----------------------------------------------------------


def _int(entry: Entry, minimum: int | None = None) -> int:
    try:
        value = int(entry.value)
    except ValueError:
        raise entry.error(f"Expected an integer, got '{entry.value}'") from None
    if minimum is not None and value < minimum:
        raise entry.error(f"Expected an integer >= {minimum}, got {value}")
    return value


def _field(entry: Entry) -> FieldElement:
    return parse_field_element(entry.value, entry.line, entry.column)


def _rational(entry: Entry) -> Fraction:
    value = is_rational(_field(entry))
    if value is None:
        raise entry.error(f"Expected a rational number, got '{entry.value}'")
    return value


def _poly(entry: Entry, nvars: int) -> Polynomial:
    return parse_polynomial(entry.value, nvars, entry.line, entry.column)


def _polys(entry: Entry, nvars: int) -> list[Polynomial]:
    return [_poly(piece, nvars) for piece in entry.split(";")]


# -- file structure ----------------------------------------------------------


def _read_sections(text: str) -> list[Section]:
    sections: list[Section] = []
    current: Section | None = None
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        header = _SECTION.match(stripped)
        if header:
            kind = header.group("kind").lower()
            if kind not in ALLOWED_KEYS:
                raise ParseError(f"Unknown block [{kind}]", number, raw.index("[") + 1)
            current = Section(kind, header.group("name"), number)
            sections.append(current)
            continue
        entry = _ENTRY.match(raw.lstrip())
        indent = len(raw) - len(raw.lstrip())
        if not entry:
            raise ParseError("Expected 'key = value' or a [block] header", number, indent + 1)
        if current is None:
            raise ParseError("Entry outside of any block", number, indent + 1)
        key = entry.group("key")
        if key not in ALLOWED_KEYS[current.kind]:
            raise ParseError(f"Unknown key '{key}' in [{current.kind}]", number, indent + 1)
        if key in current.entries:
            raise ParseError(f"Duplicate key '{key}'", number, indent + 1)
        value = raw[indent + entry.end():]
        if "#" in value:
            value = value[: value.index("#")]
        value = value.rstrip()
        if not value:
            raise ParseError(f"Empty value for '{key}'", number, indent + entry.end() + 1)
        current.entries[key] = Entry(value, number, indent + entry.end())
    return sections


def parse_problem(text: str) -> Problem:
    """Parse problem text into hypersurfaces, cycles and tasks.

    Hypersurfaces are certified smooth as soon as they are built unless every
    task only inspects the form.

    Raises:
        ParseError: On any malformed, unknown or inconsistent entry.
        SmoothnessFailure: If a task needs a smooth hypersurface and one is singular.
    """
    sections = _read_sections(text)
    rings = [s for s in sections if s.kind == "ring"]
    if len(rings) != 1:
        raise ParseError(f"Expected exactly one [ring] block, found {len(rings)}", rings[1].line if rings[1:] else 1)
    ring = rings[0]

    order = get_config().monomial_order
    if ring.get("order"):
        order = ring.get("order").value.strip().lower()
        if order not in MONOMIAL_ORDERS:
            raise ring.get("order").error(f"Unknown monomial order '{order}'")
    ring_nvars = _int(ring.get("nvars"), minimum=2) if ring.get("nvars") else None
    ring_d = _int(ring.get("d"), minimum=2) if ring.get("d") else None

    operations = []
    for section in sections:
        if section.kind == "task":
            entry = section.require("operation")
            if entry.value not in OPERATIONS:
                raise entry.error(f"Unknown operation '{entry.value}'")
            operations.append(entry.value)
    smooth_required = needs_smoothness(operations)

    hypersurfaces: dict[str, HypersurfaceSpec] = {}
    cycles: dict[str, NamedCycle] = {}
    tasks: list[TaskSpec] = []
    problem = Problem(order, hypersurfaces, cycles, tasks)

    for section in sections:
        if section.kind == "hypersurface":
            name = section.name or MAIN
            if name in hypersurfaces:
                raise ParseError(f"Hypersurface '{name}' defined twice", section.line)
            spec = _build_hypersurface(section, order, ring_nvars if name == MAIN else None, ring_d)
            # Cycle constructions assume a smooth form.
            if smooth_required:
                spec.require_smooth()
            hypersurfaces[name] = spec
        elif section.kind == "cycle":
            if section.name is None:
                raise ParseError("[cycle] blocks need a name", section.line)
            if section.name in cycles:
                raise ParseError(f"Cycle '{section.name}' defined twice", section.line)
            cycles[section.name] = _build_cycle(section, problem)
        elif section.kind == "task":
            tasks.append(TaskSpec(section.require("operation").value, section.entries, section.line))

    if MAIN not in hypersurfaces:
        raise ParseError("Missing [hypersurface] block", ring.line)
    logger.info("Parsed problem: %d hypersurfaces, %d cycles, %d tasks", len(hypersurfaces), len(cycles), len(tasks))
    return problem


def load_problem(path: Path) -> Problem:
    return parse_problem(Path(path).read_text(encoding="utf-8"))


def _build_hypersurface(section: Section, order: str, nvars: int | None, d: int | None) -> HypersurfaceSpec:
    if section.get("nvars"):
        nvars = _int(section.get("nvars"), minimum=2)
    entry = section.require("F")
    F = _poly(entry, nvars) if nvars else parse_polynomial(entry.value, None, entry.line, entry.column)
    if F.is_zero():
        raise entry.error("F must be nonzero")
    if d is not None and F.degree != d:
        raise entry.error(f"F has degree {F.degree}, ring declares d = {d}")
    if F.nvars % 2:
        raise entry.error(f"F needs an even number of variables, got {F.nvars}")
    return HypersurfaceSpec(F, order)


def _build_cycle(section: Section, problem: Problem) -> NamedCycle:
    construction = section.require("construction")
    kind = construction.value
    if kind not in CONSTRUCTIONS:
        raise construction.error(f"Unknown construction '{kind}'. Expected one of {', '.join(CONSTRUCTIONS)}")

    if kind == "join":
        left = problem.cycle(section.require("left"))
        right = problem.cycle(section.require("right"))
        spec = join_spec(left.spec, right.spec)
        return NamedCycle(section.name, spec, join_poly(left.cycle, right.cycle))

    if kind == "combination":
        parts = []
        spec = None
        for piece in section.require("parts").split(","):
            name, _, multiplicity = piece.value.partition(":")
            member = problem.cycle(Entry(name.strip(), piece.line, piece.column))
            if spec is None:
                spec = member.spec
            elif member.spec is not spec:
                raise piece.error(f"Cycle '{member.name}' lives on a different hypersurface")
            offset = piece.column + len(name) + 1
            value = _rational(Entry(multiplicity.strip(), piece.line, offset)) if multiplicity.strip() else Fraction(1)
            parts.append((value, member.cycle))
        return NamedCycle(section.name, spec, combination_poly(parts, spec))

    spec = problem.hypersurface(section.get("on"))
    if kind == "linear":
        c = [_field(piece) for piece in section.require("c").split(",")]
        cycle = linear_cycle_poly(spec.d, spec.n, c)
    elif kind == "point":
        cycle = point_poly(spec, _field(section.require("r")))
    elif kind == "fake_point":
        cycle = fake_point_poly(spec, _rational(section.require("c")))
    else:
        cycle = raw_cycle(_poly(section.require("P"), spec.nvars), spec.d)
    return NamedCycle(section.name, spec, cycle)


# -- operations --------------------------------------------------------------


def _op_smoothness(problem: Problem, task: TaskSpec) -> dict:
    spec = problem.hypersurface(task.get("hypersurface"))
    return {"smooth": spec.smooth, "socle_degree": spec.socle_degree}


def _op_hilbert(problem: Problem, task: TaskSpec) -> dict:
    named = problem.cycle(task.require("cycle"))
    values = hilbert_function(named.spec, named.cycle)
    return {"hilbert": values, "socle_degree": len(values) - 2}


def _op_colon(problem: Problem, task: TaskSpec) -> dict:
    named = problem.cycle(task.require("cycle"))
    return colon_piece(named.spec, named.cycle, _int(task.require("degree"), minimum=0)).to_dict()


def _op_ideal_piece(problem: Problem, task: TaskSpec) -> dict:
    spec = problem.hypersurface(task.get("hypersurface"))
    gens = _polys(task.require("gens"), spec.nvars)
    return ideal_piece(gens, spec, _int(task.require("degree"), minimum=0)).to_dict()


def _op_quotient(problem: Problem, task: TaskSpec) -> dict:
    named = problem.cycle(task.require("cycle"))
    presentation = quotient_presentation(named.spec, named.cycle, _int(task.require("degree"), minimum=0))
    return {
        "degree": presentation.degree,
        "standard_monomials": [monomial_text(m) or "1" for m in presentation.standard_monomials],
    }


def _op_gorenstein(problem: Problem, task: TaskSpec) -> dict:
    named = problem.cycle(task.require("cycle"))
    return is_artinian_gorenstein(named.spec, named.cycle).to_dict()


def _op_ideal_equal(problem: Problem, task: TaskSpec) -> dict:
    first = problem.cycle(task.require("cycle"))
    second = problem.cycle(task.require("other"))
    if first.spec is not second.spec:
        raise task.require("other").error("Cycles live on different hypersurfaces")
    method = task.get("method").value if task.get("method") else "both"
    return {"equal": ideal_equal(first.spec, first.cycle, second.cycle, method), "method": method}


def _op_membership(problem: Problem, task: TaskSpec) -> dict:
    spec = problem.hypersurface(task.get("hypersurface"))
    gens = _polys(task.require("gens"), spec.nvars)
    return {"member": membership(spec, gens, _poly(task.require("Q"), spec.nvars))}


def _op_hessian(problem: Problem, task: TaskSpec) -> dict:
    spec = problem.hypersurface(task.get("hypersurface"))
    return {"hessian": hessian_det(spec).to_text(spec.order)}


def _op_fake_linear(problem: Problem, task: TaskSpec) -> dict:
    named = problem.cycle(task.require("cycle"))
    return is_fake_linear(named.spec, named.cycle).to_dict()


def _op_point_basis(problem: Problem, task: TaskSpec) -> dict:
    named = problem.cycle(task.require("cycle"))
    entry = task.get("roots")
    roots = [_rational(piece) for piece in entry.split(",")] if entry else rational_roots(named.spec)
    coefficients = express_in_point_basis(named.cycle, roots)
    return {"roots": [format_field(r) for r in roots], "coefficients": [format_field(q) for q in coefficients]}


def _op_koszul(problem: Problem, task: TaskSpec) -> dict:
    spec = problem.hypersurface(task.get("hypersurface"))
    return koszul_decompose(spec, _poly(task.require("A"), spec.nvars)).to_dict()


def _op_qff_pair(problem: Problem, task: TaskSpec) -> dict:
    named = problem.cycle(task.require("cycle"))
    nvars = named.spec.nvars
    G = _poly(task.require("G"), nvars)
    H = _poly(task.require("H"), nvars) if task.get("H") else G
    return qff_pair(named.spec, named.cycle, G, H).to_dict()


def _op_qff_vanishes(problem: Problem, task: TaskSpec) -> dict:
    named = problem.cycle(task.require("cycle"))
    workers = _int(task.get("workers"), minimum=1) if task.get("workers") else None
    degree = _int(task.require("degree"), minimum=0)
    return qff_vanishes_on_degree(named.spec, named.cycle, degree, workers=workers).to_dict()


def _op_fake_certificate(problem: Problem, task: TaskSpec) -> dict:
    factors = [problem.hypersurface(piece) for piece in task.require("factors").split(",")]
    c_list = [_field(piece) for piece in task.require("c").split(",")]
    return fake_point_certificate(factors, c_list).to_dict()


def _op_tensor(problem: Problem, task: TaskSpec) -> dict:
    left = problem.cycle(task.require("left"))
    right = problem.cycle(task.require("right"))
    return {"holds": verify_tensor_decomposition(left.spec, right.spec, left.cycle, right.cycle)}


def _op_two_point(problem: Problem, task: TaskSpec) -> dict:
    return two_point_witness(
        _int(task.require("d"), minimum=2),
        _int(task.require("alpha0")),
        _rational(task.require("r")),
        _rational(task.require("rcheck")),
    ).to_dict()


OPERATIONS: dict[str, Callable[[Problem, TaskSpec], dict]] = {
    "smoothness_check": _op_smoothness,
    "hilbert_function": _op_hilbert,
    "colon_piece": _op_colon,
    "ideal_piece": _op_ideal_piece,
    "quotient_presentation": _op_quotient,
    "is_artinian_gorenstein": _op_gorenstein,
    "ideal_equal": _op_ideal_equal,
    "membership": _op_membership,
    "hessian_det": _op_hessian,
    "is_fake_linear": _op_fake_linear,
    "express_in_point_basis": _op_point_basis,
    "koszul_decompose": _op_koszul,
    "qff_pair": _op_qff_pair,
    "qff_vanishes_on_degree": _op_qff_vanishes,
    "fake_point_certificate": _op_fake_certificate,
    "verify_tensor_decomposition": _op_tensor,
    "two_point_witness": _op_two_point,
}

# Operations that only inspect the hypersurface and so run on singular input too.
_SMOOTHNESS_FREE = ("smoothness_check", "hessian_det", "ideal_piece", "two_point_witness")


def needs_smoothness(operations) -> bool:
    return any(operation not in _SMOOTHNESS_FREE for operation in operations)


def run_task(problem: Problem, task: TaskSpec, index: int = 0, timing: bool = False) -> Report:
    logger.info("Running task '%s' (line %d)", task.operation, task.line)
    start = time.perf_counter()
    result = OPERATIONS[task.operation](problem, task)
    elapsed = time.perf_counter() - start
    logger.info("Task '%s' (line %d) finished in %.3fs", task.operation, task.line, elapsed)
    return Report.create(task.operation, task.echo(), result, index, elapsed if timing else None)


def run_problem(
    problem: Problem, parallel: bool = False, workers: int | None = None, timing: bool = False
) -> list[Report]:
    """Run every task; reports come back in task order.

    Reports are identical across runs unless ``timing`` adds wall-clock times.

    Raises:
        SmoothnessFailure: If a task needs a smooth hypersurface and one is singular.
    """
    if needs_smoothness(task.operation for task in problem.tasks):
        for spec in problem.hypersurfaces.values():
            spec.require_smooth()
    indices = range(len(problem.tasks))
    if not parallel or len(problem.tasks) < 2:
        return [run_task(problem, task, index, timing) for index, task in enumerate(problem.tasks)]
    workers = workers or get_config().parallel_workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_task, repeat(problem), problem.tasks, indices, repeat(timing)))

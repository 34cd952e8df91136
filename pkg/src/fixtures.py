"""Published worked examples, recomputed exactly.

Each fixture rebuilds one worked example from its defining data, runs it
through the library and records named pass/fail checks. ``run_fixture``
returns the result; ``require_pass`` turns a failed result into
``FixtureMismatch`` for callers that want an exception.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Callable

from src.config import get_config
from src.cycles import (
    FAKE_LINEAR,
    LINEAR,
    NOT_LINEAR_TYPE,
    HilbertFn,
    combination_poly,
    express_in_point_basis,
    fake_point_poly,
    is_fake_linear,
    join_poly,
    join_spec,
    linear_cycle_hf,
    linear_cycle_poly,
    point_poly,
    verify_tensor_decomposition,
)
from src.errors import FixtureMismatch, UnknownFixture
from src.exactfield import ONE, ZERO, FieldElement, format_field, zeta_pow
from src.jacobian import (
    GradedSubspace,
    HypersurfaceSpec,
    colon_piece,
    hilbert_function,
    ideal_piece,
    in_colon,
    is_artinian_gorenstein,
)
from src.polyring import (
    Monomial,
    Polynomial,
    binary_form_from_roots,
    fermat_form,
    linear_form,
    pullback,
)
from src.qform import (
    DEGENERATE,
    NOT_SMOOTH,
    SMOOTH_EXPECTED,
    fake_point_certificate,
    qff_join_check,
    qff_pair,
    qff_vanishes_on_degree,
    two_point_witness,
)

logger = logging.getLogger(__name__)

ORDER = "grevlex"

# Rational-root sextic and the fake point at c = -1.
SEXTIC_ROOTS = tuple(Fraction(v) for v in ("0", "1", "1/2", "1/4", "1/3", "2/5"))
SEXTIC_C = Fraction(-1)
SEXTIC_A = Fraction(659, 60)
SEXTIC_B = Fraction(-1861, 60)
SEXTIC_COEFFICIENTS = tuple(Fraction(v) for v in ("2", "-3/2", "-1/3", "3/5", "1/4"))
PRINTED_SEXTIC_COEFFICIENTS = tuple(
    Fraction(v) for v in ("-207283/810", "-68941/270", "-507311/1620", "-26911/180", "-891881/1620")
)
SEXTIC_SCALE_SQUARE = Fraction(-3, 1600)

# Small rationals used as roots and parameters of random binary forms.
_RATIONAL_POOL = tuple(Fraction(v) for v in ("0", "1", "-1", "2", "-2", "1/2", "-1/2", "3"))


@dataclass
class FixtureResult:
    """Outcome of one fixture: named checks plus informational details."""

    fixture_id: str
    description: str
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    @property
    def mismatches(self) -> list[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def check(self, name: str, ok: bool) -> bool:
        self.checks[name] = bool(ok)
        if not ok:
            logger.info("Fixture %s: check failed: %s", self.fixture_id, name)
        return bool(ok)

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        data = {
            "fixture": self.fixture_id,
            "description": self.description,
            "passed": self.passed,
            "checks": dict(self.checks),
            "details": dict(self.details),
        }
        if timing:
            data["elapsed"] = round(self.elapsed, 3)
        return data


@dataclass(frozen=True)
class Fixture:
    fixture_id: str
    description: str
    runner: Callable[[FixtureResult, dict], None]
    parameters: tuple[str, ...] = ()


FIXTURES: dict[str, Fixture] = {}


def _register(fixture_id: str, description: str, parameters: tuple[str, ...] = ()):
    def decorator(func: Callable[[FixtureResult, dict], None]):
        FIXTURES[fixture_id] = Fixture(fixture_id, description, func, parameters)
        return func

    return decorator


def fixture_ids() -> list[str]:
    return list(FIXTURES)


def run_fixture(fixture_id: str, params: dict | None = None) -> FixtureResult:
    """Recompute one fixture.

    Args:
        fixture_id: Registered fixture name.
        params: Overrides; keys the fixture does not accept are ignored.

    Raises:
        UnknownFixture: If the id is not registered.
    """
    fixture = FIXTURES.get(fixture_id)
    if fixture is None:
        raise UnknownFixture(f"Unknown fixture '{fixture_id}'. Known: {', '.join(FIXTURES)}")
    params = {k: v for k, v in (params or {}).items() if v is not None}
    ignored = sorted(set(params) - set(fixture.parameters))
    if ignored:
        logger.warning("Fixture %s ignores parameters %s", fixture_id, ignored)
    accepted = {k: v for k, v in params.items() if k in fixture.parameters}

    result = FixtureResult(fixture_id, fixture.description)
    logger.info("Fixture %s started", fixture_id)
    start = time.perf_counter()
    fixture.runner(result, accepted)
    result.elapsed = time.perf_counter() - start
    logger.info("Fixture %s finished in %.2fs: %s", fixture_id, result.elapsed, "pass" if result.passed else "FAIL")
    return result


def run_all(params: dict | None = None) -> list[FixtureResult]:
    return [run_fixture(fixture_id, params) for fixture_id in FIXTURES]


def require_pass(result: FixtureResult) -> FixtureResult:
    if not result.passed:
        raise FixtureMismatch(f"Fixture {result.fixture_id} failed: {', '.join(result.mismatches)}")
    return result


# -- helpers -----------------------------------------------------------------


def _mono(nvars: int, *variables: int) -> Monomial:
    """Exponent vector of the product of the listed variables (with repeats)."""
    exps = [0] * nvars
    for v in variables:
        exps[v] += 1
    return tuple(exps)


def _form(nvars: int, *terms: tuple[FieldElement, tuple[int, ...]]) -> Polynomial:
    """sum coeff * prod(variables) over (coeff, variables) pairs."""
    out: dict[Monomial, FieldElement] = {}
    for coeff, variables in terms:
        mono = _mono(nvars, *variables)
        out[mono] = out.get(mono, ZERO) + coeff
    return Polynomial(nvars, out)


def _same_subspace(a: GradedSubspace, b: GradedSubspace) -> bool:
    return a.rank == b.rank and all(b.contains(p) for p in a.polynomials())


def _hf(values) -> tuple[int, ...]:
    return HilbertFn.from_vector(values).values


def _check_members(result: FixtureResult, spec: HypersurfaceSpec, cycle, generators: dict[str, Polynomial]) -> None:
    for name, G in generators.items():
        result.check(f"generator {name} in colon ideal", in_colon(spec, cycle, G))


def _check_qff(result: FixtureResult, spec: HypersurfaceSpec, cycle, top: int, workers: int | None) -> None:
    for degree in range(1, top + 1):
        outcome = qff_vanishes_on_degree(spec, cycle, degree, workers=workers)
        result.check(f"quadratic form vanishes in degree {degree}", outcome.vanishes)


def _combination(d: int, nvars: int, alphas, r, rcheck) -> tuple[HypersurfaceSpec, Any]:
    """r * L + rcheck * Lcheck on the Fermat form, L at zeta_2d and Lcheck at zeta_2d^alpha_j."""
    spec = HypersurfaceSpec(fermat_form(nvars, d), ORDER)
    pairs = nvars // 2
    zeta = zeta_pow(2 * d, 1)
    honest = linear_cycle_poly(d, nvars - 2, [zeta] * pairs)
    twisted = linear_cycle_poly(d, nvars - 2, [zeta_pow(2 * d, a) for a in alphas])
    return spec, combination_poly([(Fraction(r), honest), (Fraction(rcheck), twisted)], spec)


def _alphas(params: dict, count: int, default: tuple[int, ...]) -> tuple[int, ...]:
    alphas = list(params.get("alphas") or default)
    if "alpha0" in params:
        alphas[0] = int(params["alpha0"])
    if len(alphas) != count:
        raise ValueError(f"Expected {count} exponents, got {len(alphas)}")
    return tuple(alphas)


# -- fixtures ----------------------------------------------------------------


@_register(
    "fermat-point-colon",
    "Colon ideal of the point (zeta_2d : 1) on x0^d + x1^d is <x0 - zeta_2d x1, x1^(d-1)>, "
    "and joins of such points give <x_2j - zeta_2d x_2j+1, x_2j+1^(d-1)>",
)
def _fermat_point_colon(result: FixtureResult, params: dict) -> None:
    cases = [(d, 1) for d in (3, 4, 5, 6)] + [(3, 2), (4, 2), (3, 3)]
    for d, pairs in cases:
        nvars = 2 * pairs
        label = f"d={d}, n={nvars - 2}"
        spec = HypersurfaceSpec(fermat_form(nvars, d), ORDER)
        zeta = zeta_pow(2 * d, 1)
        cycle = linear_cycle_poly(d, nvars - 2, [zeta] * pairs)
        gens = []
        for j in range(pairs):
            gens.append(linear_form(nvars, {2 * j: ONE, 2 * j + 1: -zeta}))
            gens.append(Polynomial.variable(nvars, 2 * j + 1) ** (d - 1))
        sigma = spec.socle_degree - cycle.P.degree
        result.check(
            f"{label}: colon ideal",
            all(_same_subspace(colon_piece(spec, cycle, e), ideal_piece(gens, spec, e)) for e in range(sigma + 2)),
        )
        hf = _hf(hilbert_function(spec, cycle))
        result.check(f"{label}: Hilbert function", hf == linear_cycle_hf(d, nvars - 2).values)
        result.check(f"{label}: Gorenstein", is_artinian_gorenstein(spec, cycle).passed)
        result.check(f"{label}: linear verdict", is_fake_linear(spec, cycle).verdict == LINEAR)
        if pairs == 1:
            G = gens[0]
            result.check(f"{label}: q(G, G) = 0", qff_pair(spec, cycle, G, G).is_zero)
        result.details[label] = list(hf)


@_register(
    "cubic-six-variable-combination",
    "r L + rcheck Lcheck on the cubic Fermat form in 6 variables: listed generators, "
    "Hilbert function 1,6,6,1 and vanishing quadratic form in degree <= 3",
    ("r", "rcheck", "alpha0", "alphas", "workers"),
)
def _cubic_six(result: FixtureResult, params: dict) -> None:
    r, rcheck = Fraction(params.get("r", 1)), Fraction(params.get("rcheck", 2))
    a0, a2, a4 = _alphas(params, 3, (3, 5, 3))
    spec, cycle = _combination(3, 6, (a0, a2, a4), r, rcheck)
    z = partial(zeta_pow, 6)
    n = 6

    A1 = -r + rcheck * z(a0 + a2 + a4)
    A2 = r * z(1) - rcheck * z(a0 + a2 + 2 * a4)
    B1 = -(z(a0 + a2) - z(2)) / (z(a2) - z(1))
    B2 = z(a2 + 1) * (z(a0) - z(1)) / (z(a2) - z(1))
    C1 = -(z(a0) - z(1)) / (z(a2) - z(1))
    C2 = z(1) * (z(a0) - z(a2)) / (z(a2) - z(1))
    D1 = -(z(a0 + a4) - z(2)) / (z(a4) - z(1))
    D2 = z(a4 + 1) * (z(a0) - z(1)) / (z(a4) - z(1))
    E1 = -(z(a0) - z(1)) / (z(a4) - z(1))
    E2 = z(1) * (z(a0) - z(a4)) / (z(a4) - z(1))
    F1 = -(z(a2 + a4) - z(2)) / (z(a4) - z(1))
    F2 = z(a4 + 1) * (z(a2) - z(1)) / (z(a4) - z(1))
    G1 = -(z(a2) - z(1)) / (z(a4) - z(1))
    G2 = z(1) * (z(a2) - z(a4)) / (z(a4) - z(1))

    generators = {f"x{j}^2": _form(n, (ONE, (j, j))) for j in range(n)}
    generators.update({
        "x0*x1": _form(n, (ONE, (0, 1))),
        "x2*x3": _form(n, (ONE, (2, 3))),
        "x4*x5": _form(n, (ONE, (4, 5))),
        "A": _form(n, (A1, (1, 3, 4)), (A2, (1, 3, 5))),
        "B": _form(n, (ONE, (0, 2)), (B1, (1, 2)), (B2, (1, 3))),
        "C": _form(n, (ONE, (0, 3)), (C1, (1, 2)), (C2, (1, 3))),
        "D": _form(n, (ONE, (0, 4)), (D1, (1, 4)), (D2, (1, 5))),
        "E": _form(n, (ONE, (0, 5)), (E1, (1, 4)), (E2, (1, 5))),
        "F": _form(n, (ONE, (2, 4)), (F1, (3, 4)), (F2, (3, 5))),
        "G": _form(n, (ONE, (2, 5)), (G1, (3, 4)), (G2, (3, 5))),
    })
    _check_members(result, spec, cycle, generators)

    # The printed B coefficient carries zeta_6 in place of zeta_6^2.
    printed_B1 = -(z(a0 + a2) - z(1)) / (z(a2) - z(1))
    printed = _form(n, (ONE, (0, 2)), (printed_B1, (1, 2)), (B2, (1, 3)))
    result.details["printed_B_generator_member"] = in_colon(spec, cycle, printed)

    hf = _hf(hilbert_function(spec, cycle))
    result.check("Hilbert function 1,6,6,1", hf == (1, 6, 6, 1))
    result.check("Gorenstein", is_artinian_gorenstein(spec, cycle).passed)
    result.check("not of linear type", is_fake_linear(spec, cycle).verdict == NOT_LINEAR_TYPE)
    _check_qff(result, spec, cycle, 3, params.get("workers"))
    result.details.update(
        alphas=[a0, a2, a4], r=format_field(r), rcheck=format_field(rcheck),
        A=[format_field(A1), format_field(A2)], hilbert=list(hf),
    )


@_register(
    "cubic-four-variable-combination",
    "r L + rcheck Lcheck on the cubic Fermat form in 4 variables: listed generators "
    "(both branches of A1), Hilbert function 1,4,1 and vanishing quadratic form in degree <= 2",
    ("r", "rcheck", "alpha0", "alphas", "workers"),
)
def _cubic_four(result: FixtureResult, params: dict) -> None:
    r, rcheck = Fraction(params.get("r", 1)), Fraction(params.get("rcheck", 2))
    a0, a2 = _alphas(params, 2, (3, 5))
    spec, cycle = _combination(3, 4, (a0, a2), r, rcheck)
    z = partial(zeta_pow, 6)
    n = 4

    A1 = r * z(2) + rcheck * z(a0 + a2)
    A2 = r - rcheck * z(a0 + 2 * a2)
    if A1:
        B = (A1, ZERO, r * z(1) - rcheck * z(2 * (a0 + a2)))
        C = (A1, ZERO, r - rcheck * z(2 * a0 + a2))
    else:
        B = (A2, -r * z(1) + rcheck * z(2 * (a0 + a2)), ZERO)
        C = (A2, -r + rcheck * z(2 * a0 + a2), ZERO)

    generators = {f"x{j}^2": _form(n, (ONE, (j, j))) for j in range(n)}
    generators.update({
        "x0*x1": _form(n, (ONE, (0, 1))),
        "x2*x3": _form(n, (ONE, (2, 3))),
        "A": _form(n, (A1, (1, 2)), (A2, (1, 3))),
        "B": _form(n, (B[0], (0, 2)), (B[1], (1, 2)), (B[2], (1, 3))),
        "C": _form(n, (C[0], (0, 3)), (C[1], (1, 2)), (C[2], (1, 3))),
    })
    _check_members(result, spec, cycle, generators)

    hf = _hf(hilbert_function(spec, cycle))
    result.check("Hilbert function 1,4,1", hf == (1, 4, 1))
    result.check("Gorenstein", is_artinian_gorenstein(spec, cycle).passed)
    _check_qff(result, spec, cycle, 2, params.get("workers"))
    result.details.update(
        alphas=[a0, a2], r=format_field(r), rcheck=format_field(rcheck),
        branch="A1 != 0" if A1 else "A1 = 0", hilbert=list(hf),
    )


@_register(
    "quartic-four-variable-combination",
    "r L + rcheck Lcheck on the quartic Fermat form in 4 variables: listed generators, "
    "Hilbert function 1,4,6,4,1 and vanishing quadratic form in degree <= 4",
    ("r", "rcheck", "alpha0", "alphas", "workers"),
)
def _quartic_four(result: FixtureResult, params: dict) -> None:
    r, rcheck = Fraction(params.get("r", 1)), Fraction(params.get("rcheck", 2))
    a0, a2 = _alphas(params, 2, (3, 5))
    spec, cycle = _combination(4, 4, (a0, a2), r, rcheck)
    z = partial(zeta_pow, 8)
    n = 4

    A1 = r * z(2) + rcheck * z(a0 + a2)
    A2 = -(r * z(3) + rcheck * z(a0 + 2 * a2))
    B1 = (z(2) - z(a0 + a2)) / (z(a2) - z(1))
    B2 = z(1) * (z(a0 + a2) - z(a2 + 1)) / (z(a2) - z(1))
    C1 = (z(1) - z(a0)) / (z(a2) - z(1))
    C2 = z(1) * (z(a0) - z(a2)) / (z(a2) - z(1))

    def quadric(a: int) -> tuple[FieldElement, FieldElement]:
        denominator = z(2) * (z(a) - z(1))
        return -(z(2 * (a + 1)) + 1) / denominator, z(a) * (1 + z(a + 3)) / denominator

    D1, D2 = quadric(a0)
    E1, E2 = quadric(a2)

    generators = {
        "x1^3": _form(n, (ONE, (1, 1, 1))),
        "x3^3": _form(n, (ONE, (3, 3, 3))),
        "x0*x1^2": _form(n, (ONE, (0, 1, 1))),
        "x2*x3^2": _form(n, (ONE, (2, 3, 3))),
        "A": _form(n, (A1, (1, 1, 2, 3)), (A2, (1, 1, 3, 3))),
        "B": _form(n, (ONE, (0, 2)), (B1, (1, 2)), (B2, (1, 3))),
        "C": _form(n, (ONE, (0, 3)), (C1, (1, 2)), (C2, (1, 3))),
        "D": _form(n, (ONE, (0, 0)), (D1, (0, 1)), (D2, (1, 1))),
        "E": _form(n, (ONE, (2, 2)), (E1, (2, 3)), (E2, (3, 3))),
    }
    _check_members(result, spec, cycle, generators)

    hf = _hf(hilbert_function(spec, cycle))
    result.check("Hilbert function 1,4,6,4,1", hf == (1, 4, 6, 4, 1))
    result.check("Gorenstein", is_artinian_gorenstein(spec, cycle).passed)
    _check_qff(result, spec, cycle, 4, params.get("workers"))
    result.details.update(alphas=[a0, a2], r=format_field(r), rcheck=format_field(rcheck), hilbert=list(hf))


@_register(
    "binary-determinant-witness",
    "det(q1(G,G), Q1, Q2) = zeta^(3a+3) (zeta^a - zeta)^5 r^2 rcheck^2 (r - rcheck) "
    "for two points on x0^d + x1^d; zero iff r = rcheck",
    ("d", "alpha0", "r", "rcheck"),
)
def _binary_determinant(result: FixtureResult, params: dict) -> None:
    if params:
        d = int(params.get("d", 4))
        cases = [(d, int(params.get("alpha0", 3)), Fraction(params.get("r", 1)), Fraction(params.get("rcheck", 2)))]
    else:
        cases = [
            (d, alpha0, Fraction(r), Fraction(rcheck))
            for d in (4, 5, 6)
            for alpha0 in range(3, 2 * d, 2)
            for r in (1, 2, 3)
            for rcheck in (1, 2, 3)
        ]
    for d, alpha0, r, rcheck in cases:
        label = f"d={d}, alpha0={alpha0}, r={format_field(r)}, rcheck={format_field(rcheck)}"
        report = two_point_witness(d, alpha0, r, rcheck)
        if report.verdict == DEGENERATE:
            result.check(f"{label}: degenerate", report.determinant is None)
            result.details[label] = report.to_dict()
            continue
        result.check(f"{label}: closed form", report.matches)
        result.check(f"{label}: zero iff r = rcheck", (report.determinant == 0) == (r == rcheck))
        if len(cases) == 1:
            result.details[label] = report.to_dict()
    result.details["cases"] = len(cases)


def _random_binary_cycle(rng: random.Random, d: int):
    """A point or fake point on a binary form: Fermat or rational-rooted."""
    kind = rng.choice(("fermat-point", "rational-point", "fake-point"))
    if kind == "fermat-point":
        spec = HypersurfaceSpec(fermat_form(2, d), ORDER)
        return kind, spec, point_poly(spec, zeta_pow(2 * d, rng.randrange(1, 2 * d, 2)))
    roots = rng.sample(_RATIONAL_POOL, d)
    spec = HypersurfaceSpec(binary_form_from_roots(roots), ORDER)
    if kind == "rational-point":
        return kind, spec, point_poly(spec, rng.choice(roots))
    c = rng.choice([v for v in _RATIONAL_POOL if v not in roots])
    return kind, spec, fake_point_poly(spec, c)


def _random_factor(rng: random.Random, d: int, nvars: int):
    if nvars == 2:
        return _random_binary_cycle(rng, d)
    spec = HypersurfaceSpec(fermat_form(nvars, d), ORDER)
    c = [zeta_pow(2 * d, rng.randrange(1, 2 * d, 2)) for _ in range(nvars // 2)]
    return "linear", spec, linear_cycle_poly(d, nvars - 2, c)


@_register(
    "join-convolution",
    "Hilbert function of a join is the convolution of the factors' Hilbert functions, "
    "and the joint Gorenstein algebra is the tensor product",
    ("seed", "count"),
)
def _join_convolution(result: FixtureResult, params: dict) -> None:
    seed = int(params.get("seed", get_config().random_seed))
    count = int(params.get("count", 20))
    rng = random.Random(seed)
    for k in range(count):
        d = rng.choice((3, 4, 6))
        sizes = rng.choice(((2, 2), (2, 4), (4, 2))) if d == 3 else (2, 2)
        kind_f, f, P1 = _random_factor(rng, d, sizes[0])
        kind_g, g, P2 = _random_factor(rng, d, sizes[1])
        label = f"join {k + 1} (d={d}: {kind_f} + {kind_g})"
        joint = join_spec(f, g)
        product = join_poly(P1, P2)
        expected = HilbertFn.from_vector(hilbert_function(f, P1)) * HilbertFn.from_vector(hilbert_function(g, P2))
        actual = HilbertFn.from_vector(hilbert_function(joint, product))
        result.check(f"{label}: convolution", actual == expected)
        result.check(f"{label}: tensor decomposition", verify_tensor_decomposition(f, g, P1, P2))
    result.details.update(seed=seed, count=count)


@_register(
    "rational-sextic-coefficients",
    "Fake point c = -1 on prod(x0 - r_i x1), r = 0, 1, 1/2, 1/4, 1/3, 2/5, "
    "expressed in the point polynomials of r_1..r_5",
)
def _rational_sextic(result: FixtureResult, params: dict) -> None:
    spec = HypersurfaceSpec(binary_form_from_roots(SEXTIC_ROOTS), ORDER)
    result.check("smooth", spec.smooth)
    fake = fake_point_poly(spec, SEXTIC_C)
    result.check("a = F_x1(c, 1)", fake.provenance.params["a"] == SEXTIC_A)
    result.check("b = F_x0(c, 1)", fake.provenance.params["b"] == SEXTIC_B)
    result.check("F(c, 1) = 7", spec.F.evaluate([SEXTIC_C, ONE]) == 7)

    coefficients = express_in_point_basis(fake, SEXTIC_ROOTS)
    result.check("coefficients", tuple(coefficients) == SEXTIC_COEFFICIENTS)
    points = [point_poly(spec, r).P for r in SEXTIC_ROOTS[:5]]

    def rebuild(coeffs) -> Polynomial:
        total = Polynomial.zero(2)
        for q, P in zip(coeffs, points):
            total = total + P.scale(q)
        return total

    result.check("coefficients reconstruct P", rebuild(coefficients) == fake.P)
    result.details["printed_coefficients_reconstruct_P"] = rebuild(PRINTED_SEXTIC_COEFFICIENTS) == fake.P

    hf = _hf(hilbert_function(spec, fake))
    result.check("Hilbert function of a point", hf == (1,) * 5)
    forms = colon_piece(spec, fake, 1).polynomials()
    result.check("degree one colon piece is x0 + x1", forms == [linear_form(2, {0: ONE, 1: ONE})])
    result.check("fake linear", is_fake_linear(spec, fake).verdict == FAKE_LINEAR)
    result.details.update(
        coefficients=[format_field(q) for q in coefficients],
        P=fake.P.to_text(),
        hilbert=list(hf),
    )


@_register(
    "fake-point-obstruction",
    "A join with a fake point factor has q(x0 - c x1, x0 - c x1) = -d F(c,1) surviving "
    "in degree 2d-5, so its Hodge locus is not smooth; honest points give no obstruction",
)
def _fake_point_obstruction(result: FixtureResult, params: dict) -> None:
    sextic = HypersurfaceSpec(binary_form_from_roots(SEXTIC_ROOTS), ORDER)
    fermat = HypersurfaceSpec(fermat_form(2, 6), ORDER)
    zeta = zeta_pow(12, 1)

    report = fake_point_certificate([sextic, fermat], [SEXTIC_C, zeta])
    result.check("verdict NotSmoothCertified", report.verdict == NOT_SMOOTH)
    result.check("condition d >= 2 + 6/n", report.condition_holds)
    fake, honest = report.factors
    result.check("first factor is fake", fake.kind == "fake")
    result.check("second factor is a point", honest.kind == "point")
    result.check("constant is -d F(c, 1) = -42", fake.constant == -42 and fake.constant == fake.expected)
    result.check("degree 2d-5 quotient is nonzero", bool(fake.quotient_dim))
    result.check("multiplier found", fake.multiplier is not None)
    result.check("join predicate fails at (1, 2d-5)", (1, 7) in fake.predicate_failures)

    all_honest = fake_point_certificate([sextic, fermat], [Fraction(1, 2), zeta])
    result.check("all points gives SmoothExpected", all_honest.verdict == SMOOTH_EXPECTED)
    result.details.update(report=report.to_dict(), honest_verdict=all_honest.verdict)


@_register(
    "tensor-decomposition",
    "The Gorenstein algebra of a join is the tensor product of the factors' algebras",
)
def _tensor_decomposition(result: FixtureResult, params: dict) -> None:
    cubic = HypersurfaceSpec(fermat_form(2, 3), ORDER)
    zeta = zeta_pow(6, 1)
    point = point_poly(cubic, zeta)
    result.check("two cubic points", verify_tensor_decomposition(cubic, cubic, point, point))
    joint = join_spec(cubic, cubic)
    hf = _hf(hilbert_function(joint, join_poly(point, point)))
    result.check("two cubic points: Hilbert function 1,2,1", hf == (1, 2, 1))

    spec, combination = _combination(3, 4, (3, 5), 1, 2)
    result.check("combination joined with a point", verify_tensor_decomposition(spec, cubic, combination, point))

    unrelated = Polynomial.monomial(4, (1, 0, 1, 0))
    result.check(
        "unrelated product is rejected",
        not verify_tensor_decomposition(cubic, cubic, point, point, joined=unrelated),
    )
    result.details["two_point_hilbert"] = list(hf)


def _random_colon_element(rng: random.Random, spec: HypersurfaceSpec, cycle, degree: int) -> Polynomial:
    basis = colon_piece(spec, cycle, degree).polynomials()
    total = Polynomial.zero(spec.nvars)
    for G in basis:
        total = total + G.scale(rng.randint(-2, 2))
    return total if total else basis[0]


def _random_multiplier(rng: random.Random, nvars: int, degree: int) -> FieldElement | Polynomial:
    if degree == 0:
        return Fraction(rng.choice((-3, -2, -1, 1, 2, 3)))
    return linear_form(nvars, {i: Fraction(rng.randint(-2, 2)) for i in range(nvars)}) or Polynomial.variable(nvars, 0)


@_register(
    "join-identity",
    "q(A1G1 + A2G2, B1H1 + B2H2) = A1B1 P2 q1(G1,H1) + A2B2 P1 q2(G2,H2) in R^(f+g)/<P1P2>",
    ("seed", "count"),
)
def _join_identity(result: FixtureResult, params: dict) -> None:
    roots = (Fraction(0), Fraction(1), Fraction(-1))
    f = HypersurfaceSpec(binary_form_from_roots(roots), ORDER)
    P1 = point_poly(f, roots[0])
    P2 = fake_point_poly(f, Fraction(2))
    G1 = linear_form(2, {0: ONE})
    G2 = linear_form(2, {0: ONE, 1: Fraction(-2)})
    q2 = qff_pair(f, P2, G2, G2)
    result.check("fake factor has nonzero q", not q2.is_zero)
    result.check("identity with a nonzero side", qff_join_check(f, f, P1, P2, G1, G1, G2, G2))
    result.check("identity with zero multipliers", qff_join_check(f, f, P1, P2, G1, G1, G2, G2, ZERO, ZERO, ZERO, ZERO))

    seed = int(params.get("seed", get_config().random_seed))
    count = int(params.get("count", 12))
    rng = random.Random(seed)
    for k in range(count):
        d = (3, 4)[k % 2]
        _, f, P1 = _random_binary_cycle(rng, d)
        _, g, P2 = _random_binary_cycle(rng, d)
        degree = rng.choice((d - 2, d - 1))
        multiplier_degree = rng.choice((0, 1))
        G1, H1 = (_random_colon_element(rng, f, P1, degree) for _ in range(2))
        G2, H2 = (_random_colon_element(rng, g, P2, degree) for _ in range(2))
        A1, A2, B1, B2 = (_random_multiplier(rng, 4, multiplier_degree) for _ in range(4))
        result.check(
            f"instance {k + 1} (d={d}, degree {degree})",
            qff_join_check(f, g, P1, P2, G1, H1, G2, H2, A1, A2, B1, B2),
        )
    result.details.update(seed=seed, count=count, nonzero_class=q2.to_dict())


@_register(
    "sextic-transfer",
    "The rational-root sextic is carried to s (x0^6 + x1^6) with s^2 = -3/1600, "
    "and its fake point to the fake linear cycle with c0 = zeta_12^-3 (3 zeta_6^2 - 1)/(3 - zeta_6^2)",
)
def _sextic_transfer(result: FixtureResult, params: dict) -> None:
    z12 = partial(zeta_pow, 12)
    z6 = partial(zeta_pow, 6)
    x0, x1 = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    phi = [x0, x0 + x1]
    factor = 1 + z12(10)
    psi = [linear_form(2, {0: ONE, 1: -z12(1)}), linear_form(2, {0: factor, 1: -factor * z12(3)})]

    F = binary_form_from_roots(SEXTIC_ROOTS)
    moved = pullback(pullback(F, phi), psi)
    s = moved.coefficient((6, 0))
    result.check("pullback is a multiple of x0^6 + x1^6", moved == fermat_form(2, 6).scale(s))
    result.check("s^2 = -3/1600", s * s == SEXTIC_SCALE_SQUARE)

    spec = HypersurfaceSpec(F, ORDER)
    fake = fake_point_poly(spec, SEXTIC_C)
    moved_P = pullback(pullback(fake.P, phi), psi)
    fermat = HypersurfaceSpec(fermat_form(2, 6), ORDER)
    c0 = z12(-3) * (3 * z6(2) - 1) / (3 - z6(2))
    forms = colon_piece(fermat, moved_P, 1).polynomials()
    result.check("degree one colon piece is x0 - c0 x1", forms == [linear_form(2, {0: ONE, 1: -c0})])
    result.check("c0 is not a Fermat root", fermat.F.evaluate([c0, ONE]) != 0)
    result.check("fake linear on the Fermat sextic", is_fake_linear(fermat, moved_P).verdict == FAKE_LINEAR)
    result.details.update(s=format_field(s), c0=format_field(c0))

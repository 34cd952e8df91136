"""Cycle polynomials: linear cycles, points, fake points, joins and combinations.

Every constructor returns a ``CycleSpec`` holding the polynomial P whose colon
ideal J^F : P encodes the cycle class, together with its provenance. Linear
cycles carry a residue scale prod_j d*c_j so that integer combinations of
linear cycles and points are taken with the normalization in which the point
polynomial of a root c of x0^d + x1^d is d*c*(x0^(d-1) - (c x1)^(d-1))/(x0 - c x1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sympy import Poly, QQ, Rational, symbols

from src.errors import (
    ArityMismatch,
    DegreeMismatch,
    NonRationalRoots,
    NotProductStructured,
    RootCollision,
    RootMismatch,
    SingularSystem,
    ZeroClass,
)
from src.exactfield import ONE, ZERO, FieldElement, as_field, format_field, is_rational
from src.jacobian import HypersurfaceSpec, colon_piece, hilbert_function, in_colon, reduced_colon_basis
from src.linalg import rank, solve
from src.polyring import (
    Polynomial,
    binary_form_from_roots,
    divide_exact,
    fermat_form,
    linear_form,
    monomial_basis,
    pullback,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Provenance:
    kind: str
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for key, value in self.params.items():
            if isinstance(value, Provenance):
                out[key] = value.to_dict()
            elif isinstance(value, (list, tuple)):
                out[key] = [_describe(v) for v in value]
            else:
                out[key] = _describe(value)
        return out


def _describe(value):
    if isinstance(value, Provenance):
        return value.to_dict()
    if isinstance(value, tuple) and len(value) == 2 and isinstance(value[1], Provenance):
        return {"multiplicity": format_field(value[0]), "cycle": value[1].to_dict()}
    if isinstance(value, int):
        return value
    try:
        return format_field(value)
    except TypeError:
        return str(value)


@dataclass(frozen=True)
class CycleSpec:
    """A cycle polynomial P of degree (d-2)(n/2+1) in nvars = n+2 variables."""

    P: Polynomial
    d: int
    nvars: int
    provenance: Provenance
    residue_scale: FieldElement = ONE

    @property
    def n(self) -> int:
        return self.nvars - 2

    def to_dict(self) -> dict:
        return {
            "P": self.P.to_text(),
            "d": self.d,
            "nvars": self.nvars,
            "residue_scale": format_field(self.residue_scale),
            "provenance": self.provenance.to_dict(),
        }


def raw_cycle(P: Polynomial, d: int) -> CycleSpec:
    return CycleSpec(P, d, P.nvars, Provenance("raw"))


def linear_cycle_poly(d: int, n: int, c: Sequence[FieldElement]) -> CycleSpec:
    """Cycle polynomial of the linear cycle x_{2j} - c_j x_{2j+1} = 0, j = 0..n/2."""
    if n % 2 or n < 0:
        raise ArityMismatch(f"Dimension must be even and nonnegative, got {n}")
    if len(c) != n // 2 + 1:
        raise ArityMismatch(f"Need {n // 2 + 1} parameters, got {len(c)}")
    if d < 2:
        raise DegreeMismatch(f"Degree must be at least 2, got {d}")
    nvars = n + 2
    P = Polynomial.constant(nvars, ONE)
    scale: FieldElement = ONE
    for j, cj in enumerate(c):
        cj = as_field(cj)
        x, y = Polynomial.variable(nvars, 2 * j), Polynomial.variable(nvars, 2 * j + 1)
        numerator = x ** (d - 1) - (y.scale(cj)) ** (d - 1)
        P = P * divide_exact(numerator, x - y.scale(cj))
        scale = scale * d * cj
    return CycleSpec(P, d, nvars, Provenance("linear", {"c": tuple(c)}), scale)


def _require_binary(spec: HypersurfaceSpec) -> None:
    if spec.nvars != 2:
        raise ArityMismatch(f"Expected a binary form, got {spec.nvars} variables")


def point_poly(spec: HypersurfaceSpec, r: FieldElement) -> CycleSpec:
    """(r F_x0 + F_x1)/(x0 - r x1) for a root (r:1) of the binary form F."""
    _require_binary(spec)
    r = as_field(r)
    if spec.F.evaluate([r, ONE]) != 0:
        raise RootMismatch(f"{format_field(r)} is not a root of {spec.F}")
    fx, fy = spec.partials
    P = divide_exact(fx.scale(r) + fy, linear_form(2, {0: ONE, 1: -r}))
    return CycleSpec(P, spec.d, 2, Provenance("point", {"r": r}))


def rational_roots(spec: HypersurfaceSpec) -> list[Fraction]:
    """The roots r of F(r, 1) when F splits into distinct rational factors."""
    _require_binary(spec)
    coeffs = []
    for k in range(spec.d, -1, -1):
        value = is_rational(spec.F.coefficient((k, spec.d - k)))
        if value is None:
            raise NonRationalRoots(f"{spec.F} has irrational coefficients")
        coeffs.append(Rational(value.numerator, value.denominator))
    if coeffs[0] == 0:
        raise NonRationalRoots(f"{spec.F} vanishes at (1:0)")
    t = symbols("t")
    found = Poly(coeffs, t, domain=QQ).ground_roots()
    if sum(found.values()) != spec.d or any(m != 1 for m in found.values()):
        raise NonRationalRoots(f"{spec.F} does not have {spec.d} distinct rational roots")
    return sorted(Fraction(int(r.p), int(r.q)) for r in found)


def fake_point_poly(spec: HypersurfaceSpec, c: Fraction) -> CycleSpec:
    """(a F_x0 - b F_x1)/(x0 - c x1) with a = F_x1(c, 1), b = F_x0(c, 1)."""
    roots = rational_roots(spec)
    c = Fraction(c)
    if c in roots:
        raise RootCollision(f"{format_field(c)} is a root of {spec.F}")
    fx, fy = spec.partials
    a = fy.evaluate([c, ONE])
    b = fx.evaluate([c, ONE])
    P = divide_exact(fx.scale(a) - fy.scale(b), linear_form(2, {0: ONE, 1: -c}))
    return CycleSpec(P, spec.d, 2, Provenance("fake_point", {"c": c, "a": a, "b": b}))


def express_in_point_basis(P: CycleSpec | Polynomial, roots: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients of P in the point polynomials of roots[0..d-2]."""
    poly = getattr(P, "P", P)
    roots = [Fraction(r) for r in roots]
    if len(set(roots)) != len(roots):
        raise NonRationalRoots("Roots must be distinct")
    spec = HypersurfaceSpec(binary_form_from_roots(roots))
    d = spec.d
    if poly.nvars != 2 or (poly and poly.degree != d - 2):
        raise DegreeMismatch(f"Expected a binary form of degree {d - 2}")
    monomials = monomial_basis(2, d - 2, spec.order)
    index = {m: i for i, m in enumerate(monomials)}
    columns = [point_poly(spec, r).P.coordinates(index) for r in roots[: d - 1]]
    if len(columns) != len(monomials) or rank(columns) < len(columns):
        raise SingularSystem("Point polynomials are linearly dependent")
    solution = solve(columns, poly.coordinates(index))
    if solution is None:
        raise SingularSystem("No solution in the point basis")
    result = []
    for i in range(len(columns)):
        value = is_rational(solution.get(i, ZERO))
        if value is None:
            raise NonRationalRoots("Coefficient is not rational")
        result.append(value)
    return result


def join_spec(f: HypersurfaceSpec, g: HypersurfaceSpec) -> HypersurfaceSpec:
    """Hypersurface of f(x) + g(y) in the concatenated variables."""
    if f.d != g.d:
        raise DegreeMismatch(f"Cannot join degree {f.d} with degree {g.d}")
    total = f.nvars + g.nvars
    return HypersurfaceSpec(f.F.rename_variables(0, total) + g.F.rename_variables(f.nvars, total), f.order)


def join_poly(left: CycleSpec, right: CycleSpec) -> CycleSpec:
    """P(x) * P(y) for the join of two cycles on f(x) + g(y)."""
    if left.d != right.d:
        raise DegreeMismatch(f"Cannot join degree {left.d} with degree {right.d}")
    total = left.nvars + right.nvars
    P = left.P.rename_variables(0, total) * right.P.rename_variables(left.nvars, total)
    return CycleSpec(
        P,
        left.d,
        total,
        Provenance("join", {"left": left.provenance, "right": right.provenance}),
        left.residue_scale * right.residue_scale,
    )


def combination_poly(
    parts: Sequence[tuple[FieldElement, CycleSpec]], spec: HypersurfaceSpec | None = None
) -> CycleSpec:
    """sum m_i * scale_i * P_i; raises ZeroClass when the sum lies in J^F."""
    kept = [(as_field(m), cyc) for m, cyc in parts if m]
    if not kept:
        raise ZeroClass("All multiplicities are zero")
    d, nvars = kept[0][1].d, kept[0][1].nvars
    total = Polynomial.zero(nvars)
    for m, cyc in kept:
        if cyc.d != d or cyc.nvars != nvars:
            raise DegreeMismatch("Combined cycles must share degree and ambient space")
        total = total + cyc.P.scale(m * cyc.residue_scale)
    if total.is_zero() or (spec is not None and spec.in_jacobian(total)):
        raise ZeroClass("The combination is zero in the Jacobian ring")
    return CycleSpec(total, d, nvars, Provenance("combination", {"parts": tuple((m, c.provenance) for m, c in kept)}))


@dataclass(frozen=True)
class HilbertFn:
    """Hilbert function values in degrees 0..socle."""

    values: tuple[int, ...]

    @classmethod
    def from_vector(cls, values: Sequence[int]) -> "HilbertFn":
        values = list(values)
        while values and values[-1] == 0:
            values.pop()
        return cls(tuple(values))

    @property
    def socle_degree(self) -> int:
        return len(self.values) - 1

    def is_symmetric(self) -> bool:
        return self.values == self.values[::-1]

    def __mul__(self, other: "HilbertFn") -> "HilbertFn":
        return hf_convolution(self, other)

    def to_list(self) -> list[int]:
        return list(self.values)


def hf_convolution(h1: HilbertFn, h2: HilbertFn) -> HilbertFn:
    out = [0] * (len(h1.values) + len(h2.values) - 1)
    for i, a in enumerate(h1.values):
        for j, b in enumerate(h2.values):
            out[i + j] += a * b
    return HilbertFn(tuple(out))


def linear_cycle_hf(d: int, n: int) -> HilbertFn:
    """(1, ..., 1) of length d-1 convolved n/2+1 times."""
    result = HilbertFn((1,))
    for _ in range(n // 2 + 1):
        result = result * HilbertFn((1,) * (d - 1))
    return result


def complete_intersection_fake(
    fake_factor: HypersurfaceSpec, c: Fraction, fermat_roots: Sequence[FieldElement]
) -> tuple[HypersurfaceSpec, CycleSpec]:
    """Join of a fake point on a rational-root binary form with a sum of points
    on the Fermat binary form of the same degree.

    Returns the joint hypersurface and the cycle polynomial.
    """
    fermat = HypersurfaceSpec(fermat_form(2, fake_factor.d), fake_factor.order)
    points = combination_poly([(ONE, point_poly(fermat, r)) for r in fermat_roots], fermat)
    fake = fake_point_poly(fake_factor, c)
    return join_spec(fake_factor, fermat), join_poly(fake, points)


def _pairs(spec: HypersurfaceSpec) -> list[Polynomial]:
    """Split F into binary forms in the pairs (x_{2j}, x_{2j+1})."""
    for mono in spec.F.terms:
        support = {i // 2 for i, e in enumerate(mono) if e}
        if len(support) > 1:
            raise NotProductStructured(f"Monomial {mono} mixes variable pairs")
    return [spec.F.restrict((2 * j, 2 * j + 1)) for j in range(spec.nvars // 2)]


@dataclass(frozen=True)
class LinearityVerdict:
    verdict: str
    hilbert: tuple[int, ...]
    parameters: tuple | None = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "hilbert": list(self.hilbert),
            "parameters": None if self.parameters is None else [
                None if c is None else format_field(c) for c in self.parameters
            ],
        }


LINEAR = "Linear"
FAKE_LINEAR = "FakeLinear"
NOT_LINEAR_TYPE = "NotLinearType"


def is_fake_linear(spec: HypersurfaceSpec, P: CycleSpec | Polynomial) -> LinearityVerdict:
    """Classify a cycle polynomial on a sum of binary forms.

    The Hilbert function is compared with that of a linear cycle. When they
    agree the degree-one colon piece cuts out a linear space Pi; the cycle is
    Linear when F vanishes on Pi and FakeLinear otherwise.
    """
    _pairs(spec)
    hf = tuple(hilbert_function(spec, P))
    if HilbertFn.from_vector(hf) != linear_cycle_hf(spec.d, spec.n):
        return LinearityVerdict(NOT_LINEAR_TYPE, hf)
    forms = colon_piece(spec, P, 1).rows
    parameters = _pair_parameters(spec, forms)
    kernel = _linear_space(spec.nvars, forms)
    restricted = pullback(spec.F, kernel)
    verdict = LINEAR if restricted.is_zero() else FAKE_LINEAR
    logger.info("Linear-type cycle classified as %s", verdict)
    return LinearityVerdict(verdict, hf, parameters)


def _pair_parameters(spec: HypersurfaceSpec, forms) -> tuple | None:
    """c_j when every form is x_{2j} - c_j x_{2j+1}, else None."""
    params: list = [None] * (spec.nvars // 2)
    for row in forms:
        if len(row) > 2 or min(row) % 2 or any(col // 2 != min(row) // 2 for col in row):
            return None
        j = min(row) // 2
        params[j] = -row.get(2 * j + 1, ZERO)
    return tuple(params)


def _linear_space(nvars: int, forms) -> list[Polynomial]:
    """Parametrize the common zero set of linear forms given as RREF rows.

    Returns substitutions x_i -> linear form in the free parameters.
    """
    pivots = {min(row): row for row in forms}
    free = [i for i in range(nvars) if i not in pivots]
    width = max(len(free), 1)
    substitution = []
    for i in range(nvars):
        if i in pivots:
            coeffs = {k: -pivots[i][col] for k, col in enumerate(free) if col in pivots[i]}
        else:
            coeffs = {free.index(i): ONE}
        substitution.append(linear_form(width, coeffs))
    return substitution


def verify_tensor_decomposition(
    f: HypersurfaceSpec,
    g: HypersurfaceSpec,
    P1: CycleSpec | Polynomial,
    P2: CycleSpec | Polynomial,
    joined: Polynomial | None = None,
) -> bool:
    """Check J^{f+g}:P1P2 = (J^f:P1) + (J^g:P2) in the joint ring.

    The right side is contained in the left when every lifted generator
    multiplies P1P2 into J^{f+g}; the generators from J^f and J^g lift into
    J^{f+g} directly, so only the reduced colon bases are checked. Equal
    Hilbert functions then force equality.
    """
    p1, p2 = getattr(P1, "P", P1), getattr(P2, "P", P2)
    joint = join_spec(f, g)
    total = joint.nvars
    product_poly = joined if joined is not None else (
        p1.rename_variables(0, total) * p2.rename_variables(f.nvars, total)
    )
    expected = HilbertFn.from_vector(hilbert_function(f, p1)) * HilbertFn.from_vector(hilbert_function(g, p2))
    actual = HilbertFn.from_vector(hilbert_function(joint, product_poly))
    if actual != expected:
        logger.info("Join Hilbert function %s differs from convolution %s", actual.values, expected.values)
        return False
    for spec, P, offset in ((f, p1, 0), (g, p2, f.nvars)):
        for e in range(spec.socle_degree - P.degree + 2):
            for G in lift_generators(spec, P, e):
                if not in_colon(joint, product_poly, G.rename_variables(offset, total)):
                    logger.info("Lifted generator %s is not in the joint colon ideal", G)
                    return False
    return True


def lift_generators(spec: HypersurfaceSpec, P: CycleSpec | Polynomial, degree: int) -> list[Polynomial]:
    """Colon generators of one factor in one degree, modulo J of that factor."""
    if degree > spec.socle_degree:
        return []
    if degree > spec.socle_degree - getattr(P, "P", P).degree:
        return [Polynomial.monomial(spec.nvars, m) for m in spec.standard_monomials(degree)]
    return reduced_colon_basis(spec, P, degree)

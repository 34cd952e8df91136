"""The quadratic fundamental form on colon ideals and the witnesses built on it.

For G, H in J^F : P write G*P = sum Q_i F_i and H*P = sum R_i F_i. Then

    q(G, H) = sum_i (H dQ_i/dx_i - R_i dG/dx_i)

taken in R^F / <P>. Koszul decompositions come from ``koszul_decompose``;
any other decomposition differs by Koszul syzygies and gives the same class.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from src.cycles import combination_poly, fake_point_poly, join_spec, linear_cycle_poly
from src.errors import ArityMismatch, DegreeMismatch, NotInColonIdeal, NotInIdeal
from src.exactfield import ONE, ZERO, FieldElement, as_field, format_field, zeta_pow
from src.jacobian import HypersurfaceSpec, colon_piece, reduced_colon_basis
from src.linalg import determinant, reduce_against, rref
from src.polyring import Monomial, Polynomial, fermat_form, linear_form, monomial_basis

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KoszulDecomposition:
    """Components Q_i with A = sum Q_i dF/dx_i."""

    components: tuple[Polynomial, ...]

    def combine(self, spec: HypersurfaceSpec) -> Polynomial:
        total = Polynomial.zero(spec.nvars)
        for q, partial in zip(self.components, spec.partials):
            total = total + q * partial
        return total

    def to_dict(self) -> dict:
        return {"components": [q.to_text() for q in self.components]}


def koszul_decompose(spec: HypersurfaceSpec, A: Polynomial) -> KoszulDecomposition:
    """Write A in J^F as sum Q_i F_i, one block-assembled solve per monomial."""
    if A.nvars != spec.nvars:
        raise ArityMismatch(f"Polynomial has {A.nvars} variables, expected {spec.nvars}")
    components = [Polynomial.zero(spec.nvars) for _ in range(spec.nvars)]
    if A.is_zero():
        return KoszulDecomposition(tuple(components))
    if spec.normal_form(A):
        raise NotInIdeal(f"{A} is not in the Jacobian ideal")
    for mono, coeff in A.terms.items():
        for i, part in enumerate(spec.koszul_monomial(mono)):
            if part:
                components[i] = components[i] + part.scale(coeff)
    return KoszulDecomposition(tuple(components))


@dataclass(frozen=True)
class QffValue:
    representative: Polynomial
    degree: int | None
    class_coords: dict
    is_zero: bool

    def to_dict(self) -> dict:
        return {
            "representative": self.representative.to_text(),
            "degree": self.degree,
            "class_coords": {
                Polynomial.monomial(self.representative.nvars, m).to_text(): format_field(c)
                for m, c in self.class_coords.items()
            },
            "is_zero": self.is_zero,
        }


def _poly(P) -> Polynomial:
    return getattr(P, "P", P)


def _cycle_span(spec: HypersurfaceSpec, P: Polynomial, degree: int) -> dict[int, dict]:
    """Fully reduced rows of <P>_degree in R^F_degree coordinates, keyed by pivot."""
    key = ("cycle-span", P, degree)
    with spec._lock:
        cached = spec.cache.get(key)
    if cached is not None:
        return cached
    index = spec.standard_index(degree)
    rows = []
    for mono in monomial_basis(spec.nvars, degree - P.degree, spec.order):
        nf = spec.normal_form(Polynomial.monomial(spec.nvars, mono) * P)
        rows.append({index[m]: c for m, c in nf.items()})
    pivots = {min(row): row for row in rref(rows)}
    with spec._lock:
        spec.cache[key] = pivots
    return pivots


def quotient_class(spec: HypersurfaceSpec, P, poly: Polynomial) -> dict[Monomial, FieldElement]:
    """Coordinates of poly in R^F/<P>; empty when the class is zero."""
    P = _poly(P)
    if poly.is_zero():
        return {}
    degree = poly.degree
    standard = spec.standard_monomials(degree)
    index = spec.standard_index(degree)
    vec = {index[m]: c for m, c in spec.normal_form(poly).items()}
    reduce_against(vec, _cycle_span(spec, P, degree))
    return {standard[c]: v for c, v in sorted(vec.items())}


@dataclass
class _Prepared:
    G: Polynomial
    components: tuple[Polynomial, ...]
    divergence: Polynomial
    gradient: tuple[Polynomial, ...]


def _prepare(spec: HypersurfaceSpec, P: Polynomial, G: Polynomial, components=None) -> _Prepared:
    if G.nvars != spec.nvars:
        raise ArityMismatch(f"Polynomial has {G.nvars} variables, expected {spec.nvars}")
    if spec.normal_form(G * P):
        raise NotInColonIdeal(f"{G} is not in the colon ideal")
    if components is None:
        components = koszul_decompose(spec, G * P).components
    else:
        components = tuple(components)
        if KoszulDecomposition(components).combine(spec) != G * P:
            raise NotInColonIdeal("The supplied decomposition does not reproduce G*P")
    divergence = Polynomial.zero(spec.nvars)
    for i, q in enumerate(components):
        if q:
            divergence = divergence + q.partial_derivative(i)
    gradient = tuple(G.partial_derivative(i) for i in range(spec.nvars))
    return _Prepared(G, components, divergence, gradient)


def _evaluate(spec: HypersurfaceSpec, P: Polynomial, left: _Prepared, right: _Prepared) -> QffValue:
    q = right.G * left.divergence
    for r, dg in zip(right.components, left.gradient):
        if r and dg:
            q = q - r * dg
    degree = None
    if left.G and right.G:
        degree = left.G.degree + right.G.degree + P.degree - spec.d
    coords = quotient_class(spec, P, q)
    return QffValue(q, degree, coords, not coords)


def qff_pair(spec: HypersurfaceSpec, P, G: Polynomial, H: Polynomial) -> QffValue:
    """q(G, H) in R^F/<P> for G, H in the colon ideal of P."""
    P = _poly(P)
    spec.require_smooth()
    return _evaluate(spec, P, _prepare(spec, P, G), _prepare(spec, P, H))


def qff_with_decompositions(
    spec: HypersurfaceSpec,
    P,
    G: Polynomial,
    H: Polynomial,
    components_g: Sequence[Polynomial],
    components_h: Sequence[Polynomial],
) -> QffValue:
    """q(G, H) computed from caller-supplied decompositions of G*P and H*P."""
    P = _poly(P)
    spec.require_smooth()
    return _evaluate(spec, P, _prepare(spec, P, G, components_g), _prepare(spec, P, H, components_h))


@dataclass(frozen=True)
class QffVanishing:
    vanishes: bool
    degree: int
    pairs_checked: int
    witness: tuple[Polynomial, Polynomial, QffValue] | None = None

    def to_dict(self) -> dict:
        out = {"vanishes": self.vanishes, "degree": self.degree, "pairs_checked": self.pairs_checked}
        if self.witness is not None:
            G, H, value = self.witness
            out["witness"] = {"G": G.to_text(), "H": H.to_text(), "value": value.to_dict()}
        return out


def colon_basis(spec: HypersurfaceSpec, P, degree: int, reduced: bool = True) -> list[Polynomial]:
    """A spanning set of the colon piece modulo J^F (or the full RREF basis)."""
    if reduced:
        return reduced_colon_basis(spec, P, degree)
    return colon_piece(spec, P, degree).polynomials()


def qff_vanishes_on_degree(
    spec: HypersurfaceSpec, P, degree: int, reduced: bool = True, workers: int | None = None
) -> QffVanishing:
    """Evaluate q on every unordered pair of a colon basis in one degree.

    The reduced basis omits J^F, on which q vanishes identically.
    """
    P = _poly(P)
    spec.require_smooth()
    basis = colon_basis(spec, P, degree, reduced)
    prepared = [_prepare(spec, P, G) for G in basis]
    pairs = list(combinations_with_replacement(range(len(prepared)), 2))
    logger.info("Evaluating q on %d pairs in degree %d", len(pairs), degree)

    def evaluate(pair: tuple[int, int]) -> QffValue:
        i, j = pair
        return _evaluate(spec, P, prepared[i], prepared[j])

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(evaluate, pairs))
    else:
        values = []
        for pair in pairs:
            values.append(evaluate(pair))
            if not values[-1].is_zero:
                break
    for (i, j), value in zip(pairs, values):
        if not value.is_zero:
            return QffVanishing(False, degree, len(values), (basis[i], basis[j], value))
    return QffVanishing(True, degree, len(values))


def _as_joint(value, nvars: int) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(nvars, as_field(value))


def qff_join_check(
    f: HypersurfaceSpec,
    g: HypersurfaceSpec,
    P1,
    P2,
    G1: Polynomial,
    H1: Polynomial,
    G2: Polynomial,
    H2: Polynomial,
    A1=ONE,
    A2=ONE,
    B1=ONE,
    B2=ONE,
) -> bool:
    """Compare q(A1G1 + A2G2, B1H1 + B2H2) with A1B1P2 q1(G1,H1) + A2B2P1 q2(G2,H2).

    Both sides are reduced in R^{f+g}/<P1P2>. A_i, B_i are scalars or forms in
    the joint variables.
    """
    P1, P2 = _poly(P1), _poly(P2)
    joint = join_spec(f, g)
    total = joint.nvars

    def lift1(p: Polynomial) -> Polynomial:
        return p.rename_variables(0, total)

    def lift2(p: Polynomial) -> Polynomial:
        return p.rename_variables(f.nvars, total)

    A1, A2, B1, B2 = (_as_joint(v, total) for v in (A1, A2, B1, B2))
    P = lift1(P1) * lift2(P2)

    G = A1 * lift1(G1) + A2 * lift2(G2)
    H = B1 * lift1(H1) + B2 * lift2(H2)
    lhs = Polynomial.zero(total)
    if G and H:
        lhs = qff_pair(joint, P, G, H).representative

    rhs = Polynomial.zero(total)
    if A1 * B1:
        rhs = rhs + A1 * B1 * lift2(P2) * lift1(qff_pair(f, P1, G1, H1).representative)
    if A2 * B2:
        rhs = rhs + A2 * B2 * lift1(P1) * lift2(qff_pair(g, P2, G2, H2).representative)
    difference = lhs - rhs
    return not quotient_class(joint, P, difference)


def qff_join_predicate(f: HypersurfaceSpec, P1, e: int, n: int) -> list[tuple[int, int]]:
    """(l, j) pairs where q1 restricted to Sym^2 of the degree-l colon piece,
    multiplied by forms of degree j, is nonzero in R^f/<P1>.

    Ranges: l <= e, j <= 2(e-l), 2(e-l) - j <= (d-2)(n-k)/2 with k = dim f.
    """
    P1 = _poly(P1)
    k = f.n
    d = f.d
    failures = []
    for level in range(e + 1):
        prepared = [_prepare(f, P1, G) for G in colon_basis(f, P1, level)]
        nonzero = []
        for i, j in combinations_with_replacement(range(len(prepared)), 2):
            value = _evaluate(f, P1, prepared[i], prepared[j])
            if not value.is_zero:
                nonzero.append(value.representative)
        for j in range(2 * (e - level) + 1):
            if 2 * (e - level) - j > (d - 2) * (n - k) // 2:
                continue
            multipliers = monomial_basis(f.nvars, j, f.order)
            if any(
                quotient_class(f, P1, Polynomial.monomial(f.nvars, m) * q)
                for q in nonzero
                for m in multipliers
            ):
                failures.append((level, j))
    return failures


@dataclass(frozen=True)
class TwoPointReport:
    """Determinant witness for two points on the binary Fermat form."""

    d: int
    alpha0: int
    r: Fraction
    rcheck: Fraction
    verdict: str
    determinant: FieldElement | None = None
    closed_form: FieldElement | None = None
    G: Polynomial | None = None
    q_coordinates: tuple | None = None

    @property
    def matches(self) -> bool:
        return self.determinant is not None and self.determinant == self.closed_form

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "alpha0": self.alpha0,
            "r": format_field(self.r),
            "rcheck": format_field(self.rcheck),
            "verdict": self.verdict,
        }
        if self.determinant is not None:
            out.update(
                determinant=format_field(self.determinant),
                closed_form=format_field(self.closed_form),
                matches=self.matches,
                G=self.G.to_text(),
                q_coordinates=[format_field(c) for c in self.q_coordinates],
            )
        return out


DEGENERATE = "Degenerate"


def two_point_witness(d: int, alpha0: int, r, rcheck) -> TwoPointReport:
    """q1(G, G) against <P>_{2d-6} for the combination r*p(zeta) + rcheck*p(zeta^alpha0).

    zeta = zeta_{2d}. G = x1^(d-3) (w1 x0 - w2 x1) with w_k = r zeta^k + rcheck zeta^(k alpha0)
    lies in the colon ideal. The columns q1(G,G), Q1, Q2 of the 3x3 matrix are
    coordinates over x0^(d-2) x1^(d-4), x0^(d-3) x1^(d-3), x0^(d-4) x1^(d-2);
    its determinant is zeta^(3 alpha0 + 3) (zeta^alpha0 - zeta)^5 r^2 rcheck^2 (r - rcheck).
    """
    r, rcheck = Fraction(r), Fraction(rcheck)
    if d < 3:
        raise DegreeMismatch(f"Degree must be at least 3, got {d}")
    if alpha0 % 2 == 0 or not 3 <= alpha0 <= 2 * d - 1:
        raise ValueError(f"alpha0 must be odd in 3..{2 * d - 1}, got {alpha0}")
    if not r or not rcheck:
        raise ValueError("Multiplicities must be nonzero")
    if d == 3:
        return TwoPointReport(d, alpha0, r, rcheck, DEGENERATE)

    zeta = zeta_pow(2 * d, 1)
    u = zeta_pow(2 * d, alpha0)
    spec = HypersurfaceSpec(fermat_form(2, d))
    cycle = combination_poly(
        [(r, linear_cycle_poly(d, 0, [zeta])), (rcheck, linear_cycle_poly(d, 0, [u]))], spec
    )
    w = {k: r * zeta**k + rcheck * u**k for k in range(1, 5)}
    x1 = Polynomial.variable(2, 1)
    G = x1 ** (d - 3) * linear_form(2, {0: w[1], 1: -w[2]})

    value = qff_pair(spec, cycle, G, G)
    nf = spec.normal_form(value.representative)
    basis = [(d - 2, d - 4), (d - 3, d - 3), (d - 4, d - 2)]
    q_coords = tuple(nf.get(m, ZERO) for m in basis)
    matrix = [[q_coords[i], w[i + 1], w[i + 2]] for i in range(3)]
    det = determinant(matrix)
    closed = zeta ** (3 * alpha0 + 3) * (u - zeta) ** 5 * (r * r * rcheck * rcheck * (r - rcheck))
    verdict = "nonzero" if det != 0 else "zero"
    logger.info("Two-point witness d=%d alpha0=%d: determinant %s", d, alpha0, format_field(det))
    return TwoPointReport(d, alpha0, r, rcheck, verdict, det, closed, G, q_coords)


@dataclass(frozen=True)
class FactorCertificate:
    index: int
    c: FieldElement
    kind: str
    constant: FieldElement | None = None
    expected: FieldElement | None = None
    quotient_dim: int | None = None
    multiplier: Monomial | None = None
    predicate_failures: tuple = ()

    def to_dict(self) -> dict:
        out = {"index": self.index, "c": format_field(self.c), "kind": self.kind}
        if self.kind == "fake":
            out.update(
                constant=format_field(self.constant),
                expected=format_field(self.expected),
                quotient_dim=self.quotient_dim,
                multiplier=None if self.multiplier is None else Polynomial.monomial(2, self.multiplier).to_text(),
                predicate_failures=[list(p) for p in self.predicate_failures],
            )
        return out


@dataclass(frozen=True)
class FakePointReport:
    verdict: str
    d: int
    n: int
    condition_holds: bool
    factors: tuple[FactorCertificate, ...] = ()

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "d": self.d,
            "n": self.n,
            "condition_holds": self.condition_holds,
            "factors": [f.to_dict() for f in self.factors],
        }


NOT_SMOOTH = "NotSmoothCertified"
SMOOTH_EXPECTED = "SmoothExpected"


def fake_point_certificate(factors: Sequence[HypersurfaceSpec], c_list: Sequence) -> FakePointReport:
    """Certify non-smoothness for a join of points and fake points on binary forms.

    A factor whose parameter c is not a root is a fake point. For it,
    q(x0 - c x1, x0 - c x1) is the constant -d F(c, 1), and a monomial of
    degree 2d-5 that survives in R^F/<P> witnesses that the constant does
    not die after multiplication.
    """
    if len(factors) != len(c_list):
        raise ArityMismatch(f"{len(factors)} factors but {len(c_list)} parameters")
    degrees = {spec.d for spec in factors}
    if len(degrees) != 1:
        raise DegreeMismatch(f"Factors have degrees {sorted(degrees)}")
    d = degrees.pop()
    n = 2 * len(factors) - 2
    condition = n > 0 and (d - 2) * n >= 6
    if d == 2:
        return FakePointReport(DEGENERATE, d, n, condition)

    certificates = []
    for index, (spec, c) in enumerate(zip(factors, c_list)):
        c = as_field(c)
        if spec.F.evaluate([c, ONE]) == 0:
            certificates.append(FactorCertificate(index, c, "point"))
            continue
        cycle = fake_point_poly(spec, c)
        G = linear_form(2, {0: ONE, 1: -c})
        value = qff_pair(spec, cycle, G, G)
        constant = value.representative.coefficient((0, 0))
        expected = -d * spec.F.evaluate([c, ONE])
        target = 2 * d - 5
        span = _cycle_span(spec, cycle.P, target)
        quotient_dim = len(spec.standard_monomials(target)) - len(span)
        multiplier = None
        if constant:
            for mono in monomial_basis(2, target, spec.order):
                if quotient_class(spec, cycle, Polynomial.monomial(2, mono, constant)):
                    multiplier = mono
                    break
        failures = tuple(qff_join_predicate(spec, cycle, d, n)) if condition else ()
        certificates.append(
            FactorCertificate(index, c, "fake", constant, expected, quotient_dim, multiplier, failures)
        )
        logger.info("Fake factor %d: constant %s, multiplier %s", index, format_field(constant), multiplier)

    fake = [cert for cert in certificates if cert.kind == "fake"]
    if not fake:
        verdict = SMOOTH_EXPECTED
    elif any(cert.constant and cert.multiplier is not None for cert in fake):
        verdict = NOT_SMOOTH
    else:
        verdict = DEGENERATE
    return FakePointReport(verdict, d, n, condition, tuple(certificates))

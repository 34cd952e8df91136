"""Jacobian rings, colon ideals of cycle polynomials, and Gorenstein checks.

A ``HypersurfaceSpec`` splits F into blocks: connected components of the
variables that share a monomial of F. The Jacobian ring is the tensor product
of the block rings, so normal forms, standard monomials and Koszul
decompositions are computed per block and multiplied out. Fermat forms split
into single variables; sums of binary forms into pairs.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from src.config import get_config
from src.errors import (
    ArityMismatch,
    DegreeMismatch,
    InconsistentResult,
    SmoothnessFailure,
    ZeroClass,
)
from src.exactfield import ONE, ZERO, FieldElement
from src.linalg import EchelonBasis, Vector, axpy, rank, rref
from src.polyring import Monomial, Polynomial, monomial_basis, order_key

logger = logging.getLogger(__name__)

NormalForm = dict[Monomial, FieldElement]


@dataclass(frozen=True)
class GradedSubspace:
    """A subspace of C[x]_degree as sparse RREF rows over monomial_basis(nvars, degree, order)."""

    degree: int
    nvars: int
    order: str
    ambient_dim: int
    rows: tuple[Vector, ...]
    pivot_columns: tuple[int, ...]

    @classmethod
    def from_polynomials(
        cls, polys: Iterable[Polynomial], nvars: int, degree: int, order: str
    ) -> "GradedSubspace":
        monomials = monomial_basis(nvars, degree, order)
        index = {m: i for i, m in enumerate(monomials)}
        rows = rref(p.coordinates(index) for p in polys if p)
        return cls(degree, nvars, order, len(monomials), tuple(rows), tuple(min(r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def monomials(self) -> tuple[Monomial, ...]:
        return monomial_basis(self.nvars, self.degree, self.order)

    def polynomials(self) -> list[Polynomial]:
        monomials = self.monomials
        return [Polynomial.from_vector(self.nvars, row, monomials) for row in self.rows]

    def contains(self, poly: Polynomial) -> bool:
        if poly.is_zero():
            return True
        if poly.degree != self.degree:
            return False
        index = {m: i for i, m in enumerate(self.monomials)}
        vec = poly.coordinates(index)
        for row, pivot in zip(self.rows, self.pivot_columns):
            factor = vec.get(pivot)
            if factor:
                axpy(vec, -factor, row)
        return not vec

    def matrix(self) -> list[list[FieldElement]]:
        return [[row.get(c, ZERO) for c in range(self.ambient_dim)] for row in self.rows]

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "ambient_dim": self.ambient_dim,
            "rank": self.rank,
            "pivot_columns": list(self.pivot_columns),
            "generators": [p.to_text(self.order) for p in self.polynomials()],
        }


class _BlockPiece:
    """Degree-t piece of one block's Jacobian ring."""

    def __init__(self, block: "_Block", degree: int):
        self.degree = degree
        self.monomials = monomial_basis(block.nvars, degree, block.order)
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self._block = block
        self._koszul: EchelonBasis | None = None
        self._koszul_columns: list[tuple[int, Monomial]] = []

        gens = []
        for mono in monomial_basis(block.nvars, degree - (block.d - 1), block.order):
            for partial in block.partials:
                if partial:
                    gens.append((Polynomial.monomial(block.nvars, mono) * partial).coordinates(self.index))
        self.pivot_rows = {min(row): row for row in rref(gens)}
        self.standard = tuple(m for i, m in enumerate(self.monomials) if i not in self.pivot_rows)

    def normal_form(self, mono: Monomial) -> NormalForm:
        col = self.index[mono]
        row = self.pivot_rows.get(col)
        if row is None:
            return {mono: ONE}
        return {self.monomials[c]: -v for c, v in row.items() if c != col}

    def koszul(self, mono: Monomial) -> tuple[Polynomial, ...]:
        """q with mono - NF(mono) = sum_i q_i * d_i f, free unknowns set to zero."""
        block = self._block
        if self._koszul is None:
            basis = EchelonBasis(track=True)
            for mult in monomial_basis(block.nvars, self.degree - (block.d - 1), block.order):
                for i, partial in enumerate(block.partials):
                    if partial:
                        tag = len(self._koszul_columns)
                        self._koszul_columns.append((i, mult))
                        basis.insert(
                            (Polynomial.monomial(block.nvars, mult) * partial).coordinates(self.index), tag
                        )
            self._koszul = basis
        target = {self.index[mono]: ONE}
        for m, c in self.normal_form(mono).items():
            axpy(target, -ONE, {self.index[m]: c})
        residual, combo = self._koszul.reduce(target)
        if residual:
            raise InconsistentResult(f"Koszul solve failed for block monomial {mono}")
        parts: list[dict[Monomial, FieldElement]] = [{} for _ in range(block.nvars)]
        for tag, coeff in combo.items():
            i, mult = self._koszul_columns[tag]
            parts[i][mult] = parts[i].get(mult, ZERO) + coeff
        return tuple(Polynomial(block.nvars, p) for p in parts)


class _Block:
    def __init__(self, variables: tuple[int, ...], form: Polynomial, d: int, order: str):
        self.variables = variables
        self.nvars = len(variables)
        self.form = form
        self.d = d
        self.order = order
        self.partials = tuple(form.partial_derivative(i) for i in range(self.nvars))
        self._pieces: dict[int, _BlockPiece] = {}
        self._lock = threading.Lock()

    @property
    def socle_degree(self) -> int:
        return (self.d - 2) * self.nvars

    def piece(self, degree: int) -> _BlockPiece:
        with self._lock:
            piece = self._pieces.get(degree)
            if piece is None:
                piece = _BlockPiece(self, degree)
                self._pieces[degree] = piece
            return piece

    def hilbert(self, degree: int) -> int:
        if degree < 0:
            return 0
        return len(self.piece(degree).standard)

    def local(self, mono: Monomial) -> Monomial:
        return tuple(mono[v] for v in self.variables)

    def normal_form(self, local_mono: Monomial) -> NormalForm:
        return self.piece(sum(local_mono)).normal_form(local_mono)

    def koszul(self, local_mono: Monomial) -> tuple[Polynomial, ...]:
        piece = self.piece(sum(local_mono))
        with self._lock:
            return piece.koszul(local_mono)


def _decompose(F: Polynomial) -> list[tuple[int, ...]]:
    parent = list(range(F.nvars))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for mono in F.terms:
        support = [i for i, e in enumerate(mono) if e]
        for i in support[1:]:
            parent[find(i)] = find(support[0])
    groups: dict[int, list[int]] = {}
    for i in range(F.nvars):
        groups.setdefault(find(i), []).append(i)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


class HypersurfaceSpec:
    """A degree-d form F in n+2 variables with n even, plus its Jacobian ring.

    Partial derivatives and the smoothness certificate are computed on
    construction; operations that need a smooth hypersurface call
    ``require_smooth``.
    """

    def __init__(self, F: Polynomial, order: str | None = None):
        if F.is_zero():
            raise DegreeMismatch("The zero form does not define a hypersurface")
        if F.degree < 2:
            raise DegreeMismatch(f"Degree must be at least 2, got {F.degree}")
        if F.nvars % 2:
            raise ArityMismatch(f"Need an even dimension n = nvars - 2, got nvars = {F.nvars}")
        self.F = F
        self.nvars = F.nvars
        self.n = F.nvars - 2
        self.d = F.degree
        self.order = order or get_config().monomial_order
        self.partials = tuple(F.partial_derivative(i) for i in range(self.nvars))
        self.blocks = [
            _Block(variables, F.restrict(variables), self.d, self.order) for variables in _decompose(F)
        ]
        self._lock = threading.Lock()
        self._nf_cache: dict[Monomial, NormalForm] = {}
        self._standard_cache: dict[int, tuple[Monomial, ...]] = {}
        self.cache: dict = {}
        self.smooth = smoothness_check(self)
        logger.debug(
            "Hypersurface of degree %d in %d variables: %d blocks, smooth=%s",
            self.d, self.nvars, len(self.blocks), self.smooth,
        )

    @property
    def socle_degree(self) -> int:
        """Socle degree of the Jacobian ring, (d-2)(n+2)."""
        return (self.d - 2) * self.nvars

    @property
    def cycle_degree(self) -> int:
        """Degree of a cycle polynomial, (d-2)(n/2+1)."""
        return (self.d - 2) * (self.n // 2 + 1)

    def require_smooth(self) -> None:
        if not self.smooth:
            raise SmoothnessFailure(f"F = {self.F} is not smooth")

    def _assemble(self, parts: Sequence[tuple[_Block, Monomial]]) -> Monomial:
        exps = [0] * self.nvars
        for block, local in parts:
            for v, e in zip(block.variables, local):
                exps[v] = e
        return tuple(exps)

    def normal_form_monomial(self, mono: Monomial) -> NormalForm:
        with self._lock:
            cached = self._nf_cache.get(mono)
        if cached is not None:
            return cached
        factors = []
        for block in self.blocks:
            nf = block.normal_form(block.local(mono))
            if not nf:
                factors = None
                break
            factors.append([(block, m, c) for m, c in nf.items()])
        result: NormalForm = {}
        if factors is not None:
            for choice in product(*factors):
                coeff = ONE
                for _, _, c in choice:
                    coeff = coeff * c
                result[self._assemble([(b, m) for b, m, _ in choice])] = coeff
        with self._lock:
            self._nf_cache[mono] = result
        return result

    def normal_form(self, poly: Polynomial) -> NormalForm:
        """Coordinates of poly in R^F over the standard monomials."""
        if poly.nvars != self.nvars:
            raise ArityMismatch(f"Polynomial has {poly.nvars} variables, expected {self.nvars}")
        result: NormalForm = {}
        for mono, coeff in poly.terms.items():
            for std, c in self.normal_form_monomial(mono).items():
                value = result.get(std, ZERO) + coeff * c
                if value:
                    result[std] = value
                else:
                    result.pop(std, None)
        return result

    def normal_form_poly(self, poly: Polynomial) -> Polynomial:
        return Polynomial(self.nvars, self.normal_form(poly))

    def in_jacobian(self, poly: Polynomial) -> bool:
        return not self.normal_form(poly)

    def standard_monomials(self, degree: int) -> tuple[Monomial, ...]:
        """Standard monomials of R^F_degree, largest first."""
        with self._lock:
            cached = self._standard_cache.get(degree)
        if cached is not None:
            return cached
        partial: list[tuple[int, list[tuple[_Block, Monomial]]]] = [(0, [])]
        for block in self.blocks:
            extended = []
            for used, parts in partial:
                for t in range(degree - used + 1):
                    for local in block.piece(t).standard:
                        extended.append((used + t, parts + [(block, local)]))
            partial = extended
        result = tuple(
            sorted(
                (self._assemble(parts) for used, parts in partial if used == degree),
                key=order_key(self.order),
                reverse=True,
            )
        )
        with self._lock:
            self._standard_cache[degree] = result
        return result

    def standard_index(self, degree: int) -> dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.standard_monomials(degree))}

    def quotient_dim(self, degree: int) -> int:
        """dim R^F_degree from the block Hilbert functions."""
        return _convolve([[b.hilbert(t) for t in range(degree + 1)] for b in self.blocks], degree)

    def koszul_monomial(self, mono: Monomial) -> list[Polynomial]:
        """Q with mono - NF(mono) = sum_i Q_i d_i F, assembled blockwise.

        x^a - prod N_b = sum_b (prod_{b'<b} N_b') (X_b - N_b) (prod_{b'>b} X_b'),
        with X_b the block part of x^a and N_b its block normal form.
        """
        components = [Polynomial.zero(self.nvars) for _ in range(self.nvars)]
        prefix = Polynomial.constant(self.nvars, ONE)
        blocks = self.blocks
        for position, block in enumerate(blocks):
            local = block.local(mono)
            nf = block.normal_form(local)
            if nf != {local: ONE}:
                suffix_exps = [0] * self.nvars
                for later in blocks[position + 1:]:
                    for v in later.variables:
                        suffix_exps[v] = mono[v]
                outer = prefix * Polynomial.monomial(self.nvars, suffix_exps)
                for i, q in zip(block.variables, block.koszul(local)):
                    if q:
                        components[i] = components[i] + outer * self._lift(block, q)
            prefix = prefix * self._lift(block, Polynomial(block.nvars, nf))
            if not prefix:
                break
        return components

    def _lift(self, block: _Block, poly: Polynomial) -> Polynomial:
        terms = {}
        for local, c in poly.terms.items():
            exps = [0] * self.nvars
            for v, e in zip(block.variables, local):
                exps[v] = e
            terms[tuple(exps)] = c
        return Polynomial(self.nvars, terms)


def _convolve(vectors: Sequence[Sequence[int]], degree: int) -> int:
    current = [1] + [0] * degree
    for vec in vectors:
        nxt = [0] * (degree + 1)
        for i, a in enumerate(current):
            if a:
                for j, b in enumerate(vec[: degree + 1 - i]):
                    nxt[i + j] += a * b
        current = nxt
    return current[degree]


def smoothness_check(spec: HypersurfaceSpec) -> bool:
    """True iff dim R^F_{sigma} = 1 and dim R^F_{sigma+1} = 0 for sigma = (d-2)(n+2).

    A block that is not Artinian already makes the top dimension nonzero.
    """
    for block in spec.blocks:
        if block.hilbert(block.socle_degree + 1) != 0:
            logger.debug("Block %s is not Artinian", block.variables)
            return False
    sigma = spec.socle_degree
    top = _convolve([[b.hilbert(t) for t in range(sigma + 2)] for b in spec.blocks], sigma)
    beyond = _convolve([[b.hilbert(t) for t in range(sigma + 2)] for b in spec.blocks], sigma + 1)
    return top == 1 and beyond == 0


def _as_poly(P) -> Polynomial:
    return getattr(P, "P", P)


def _require_cycle(spec: HypersurfaceSpec, P: Polynomial) -> None:
    spec.require_smooth()
    if P.nvars != spec.nvars:
        raise ArityMismatch(f"Cycle polynomial has {P.nvars} variables, expected {spec.nvars}")
    if not spec.normal_form(P):
        raise ZeroClass("The cycle polynomial lies in the Jacobian ideal")


def _image(spec: HypersurfaceSpec, mono: Monomial, P: Polynomial, index: dict[Monomial, int]) -> Vector:
    """Coordinates of NF(mono * P) over the standard monomials of the target degree."""
    vec: Vector = {}
    for p_mono, coeff in P.terms.items():
        product_mono = tuple(a + b for a, b in zip(mono, p_mono))
        for std, c in spec.normal_form_monomial(product_mono).items():
            value = vec.get(index[std], ZERO) + coeff * c
            if value:
                vec[index[std]] = value
            else:
                vec.pop(index[std], None)
    return vec


def ideal_piece(gens: Iterable[Polynomial], spec: HypersurfaceSpec, degree: int) -> GradedSubspace:
    """The degree piece of the ideal generated by ``gens`` in C[x]."""
    polys = []
    for g in gens:
        if g.is_zero() or g.degree > degree:
            continue
        for mono in monomial_basis(spec.nvars, degree - g.degree, spec.order):
            polys.append(Polynomial.monomial(spec.nvars, mono) * g)
    return GradedSubspace.from_polynomials(polys, spec.nvars, degree, spec.order)


def colon_piece(spec: HypersurfaceSpec, P, degree: int) -> GradedSubspace:
    """Degree piece of J^F : P as RREF rows.

    Source monomials are processed from last to first. An image that depends
    on the images already seen yields a kernel vector whose pivot is the
    current column and whose other entries sit only at later independent
    columns, so the collected vectors are already reduced.
    """
    P = _as_poly(P)
    _require_cycle(spec, P)
    if degree < 0:
        raise DegreeMismatch(f"Negative degree {degree}")
    monomials = monomial_basis(spec.nvars, degree, spec.order)
    index = spec.standard_index(degree + P.degree)
    basis = EchelonBasis(track=True)
    kernel = []
    for j in reversed(range(len(monomials))):
        dependency = basis.insert(_image(spec, monomials[j], P, index), j)
        if dependency is not None:
            kernel.append(dependency)
    kernel.reverse()
    return GradedSubspace(
        degree, spec.nvars, spec.order, len(monomials), tuple(kernel), tuple(min(r) for r in kernel)
    )


def reduced_colon_basis(spec: HypersurfaceSpec, P, degree: int) -> list[Polynomial]:
    """Colon elements on the standard monomials of R^F_degree.

    Together with J^F_degree they span the colon piece.
    """
    P = _as_poly(P)
    _require_cycle(spec, P)
    standard = spec.standard_monomials(degree)
    index = spec.standard_index(degree + P.degree)
    basis = EchelonBasis(track=True)
    kernel = []
    for j in reversed(range(len(standard))):
        dependency = basis.insert(_image(spec, standard[j], P, index), j)
        if dependency is not None:
            kernel.append(Polynomial.from_vector(spec.nvars, dependency, standard))
    kernel.reverse()
    return kernel


def in_colon(spec: HypersurfaceSpec, P, G: Polynomial) -> bool:
    return not spec.normal_form(_as_poly(P) * G)


def _rank_in_degree(spec: HypersurfaceSpec, P: Polynomial, degree: int) -> int:
    target = spec.standard_index(degree + P.degree)
    if not target:
        return 0
    images = (_image(spec, mono, P, target) for mono in spec.standard_monomials(degree))
    return rank(images, limit=len(target))


def hilbert_function(spec: HypersurfaceSpec, P) -> list[int]:
    """dim (R^F/(J^F:P))_e for e = 0..sigma+1 where sigma = socle_degree - deg P."""
    P = _as_poly(P)
    _require_cycle(spec, P)
    sigma = spec.socle_degree - P.degree
    values = []
    for e in range(sigma + 2):
        values.append(_rank_in_degree(spec, P, e))
        logger.debug("HF(%d) = %d", e, values[-1])
    return values


@dataclass
class QuotientPresentation:
    """Coset basis of (R^{F,P})_degree chosen among all monomials of that degree."""

    degree: int
    standard_monomials: tuple[Monomial, ...]
    spec: HypersurfaceSpec = field(repr=False, compare=False)
    P: Polynomial = field(repr=False, compare=False)
    _basis: EchelonBasis = field(repr=False, compare=False)
    _index: dict = field(repr=False, compare=False)

    def coordinates(self, G: Polynomial) -> dict[Monomial, FieldElement]:
        """Coset coordinates of G; G and its reduction have the same coordinates."""
        if G.is_zero():
            return {}
        if G.degree != self.degree:
            raise DegreeMismatch(f"Expected degree {self.degree}, got {G.degree}")
        image = {}
        for mono, coeff in G.terms.items():
            axpy(image, coeff, _image(self.spec, mono, self.P, self._index))
        residual, combo = self._basis.reduce(image)
        if residual:
            raise InconsistentResult("Image outside the span of the coset basis")
        monomials = monomial_basis(self.spec.nvars, self.degree, self.spec.order)
        return {monomials[j]: c for j, c in combo.items()}

    def reduce(self, G: Polynomial) -> Polynomial:
        return Polynomial(self.spec.nvars, self.coordinates(G))


def quotient_presentation(spec: HypersurfaceSpec, P, degree: int) -> QuotientPresentation:
    P = _as_poly(P)
    _require_cycle(spec, P)
    monomials = monomial_basis(spec.nvars, degree, spec.order)
    index = spec.standard_index(degree + P.degree)
    basis = EchelonBasis(track=True)
    chosen = []
    for j in reversed(range(len(monomials))):
        if basis.insert(_image(spec, monomials[j], P, index), j) is None:
            chosen.append(monomials[j])
    chosen.reverse()
    return QuotientPresentation(degree, tuple(chosen), spec, P, basis, index)


@dataclass(frozen=True)
class GorensteinCertificate:
    passed: bool
    socle_degree: int
    hilbert: tuple[int, ...]
    failing_degree: int | None = None
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "socle_degree": self.socle_degree,
            "hilbert": list(self.hilbert),
            "failing_degree": self.failing_degree,
            "reason": self.reason,
        }


def is_artinian_gorenstein(spec: HypersurfaceSpec, P) -> GorensteinCertificate:
    """Check vanishing above sigma, a one-dimensional socle, and a perfect pairing."""
    P = _as_poly(P)
    hf = tuple(hilbert_function(spec, P))
    sigma = len(hf) - 2

    def fail(e: int, reason: str) -> GorensteinCertificate:
        logger.info("Gorenstein check failed in degree %d: %s", e, reason)
        return GorensteinCertificate(False, sigma, hf, e, reason)

    if hf[sigma + 1] != 0:
        return fail(sigma + 1, "quotient does not vanish above the socle degree")
    if hf[sigma] != 1:
        return fail(sigma, f"socle has dimension {hf[sigma]}")
    (socle,) = spec.standard_monomials(spec.socle_degree)
    for i in range(sigma // 2 + 1):
        if hf[i] != hf[sigma - i]:
            return fail(i, "Hilbert function is not symmetric")
        left = quotient_presentation(spec, P, i).standard_monomials
        right = quotient_presentation(spec, P, sigma - i).standard_monomials
        rows = []
        for a in left:
            row = {}
            for j, b in enumerate(right):
                mono = tuple(x + y for x, y in zip(a, b))
                value = spec.normal_form(Polynomial.monomial(spec.nvars, mono) * P).get(socle, ZERO)
                if value:
                    row[j] = value
            rows.append(row)
        if rank(rows) != hf[i]:
            return fail(i, "pairing into the socle is degenerate")
    return GorensteinCertificate(True, sigma, hf)


def _span_ratio(a: dict, b: dict) -> FieldElement | None:
    """c with b = c*a, or None."""
    if not a:
        return None
    key = next(iter(a))
    ratio = b.get(key, ZERO) / a[key]
    if not ratio:
        return None
    keys = set(a) | set(b)
    if all(b.get(k, ZERO) == ratio * a.get(k, ZERO) for k in keys):
        return ratio
    return None


def ideal_equal(spec: HypersurfaceSpec, P1, P2, method: str = "both") -> bool:
    """Whether J^F:P1 = J^F:P2.

    "span" compares NF(P1) and NF(P2) up to a scalar, "colon" compares every
    colon piece up to the socle degree, "both" runs both and insists they agree.
    """
    P1, P2 = _as_poly(P1), _as_poly(P2)
    if P1.degree != P2.degree:
        raise DegreeMismatch(f"Cycle polynomials have degrees {P1.degree} and {P2.degree}")
    _require_cycle(spec, P1)
    _require_cycle(spec, P2)
    if method not in ("span", "colon", "both"):
        raise ValueError(f"Unknown method '{method}'")
    by_span = by_colon = None
    if method in ("span", "both"):
        by_span = _span_ratio(spec.normal_form(P1), spec.normal_form(P2)) is not None
    if method in ("colon", "both"):
        sigma = spec.socle_degree - P1.degree
        by_colon = all(colon_piece(spec, P1, e) == colon_piece(spec, P2, e) for e in range(sigma + 1))
    if by_span is not None and by_colon is not None and by_span != by_colon:
        raise InconsistentResult(f"Span test says {by_span}, colon test says {by_colon}")
    return by_span if by_span is not None else by_colon


def membership(spec: HypersurfaceSpec, gens: Iterable[Polynomial], Q: Polynomial) -> bool:
    """Whether Q lies in the ideal generated by ``gens`` and the partials of F."""
    if Q.is_zero():
        return True
    index = spec.standard_index(Q.degree)
    basis = EchelonBasis()
    for g in gens:
        if g.is_zero() or g.degree > Q.degree:
            continue
        for mono in monomial_basis(spec.nvars, Q.degree - g.degree, spec.order):
            image = {}
            for m, c in spec.normal_form(Polynomial.monomial(spec.nvars, mono) * g).items():
                image[index[m]] = c
            basis.insert(image)
    target = {index[m]: c for m, c in spec.normal_form(Q).items()}
    return basis.contains(target)


def _polynomial_determinant(matrix: list[list[Polynomial]], nvars: int) -> Polynomial:
    size = len(matrix)
    memo: dict[tuple[int, tuple[int, ...]], Polynomial] = {}

    def minor(row: int, cols: tuple[int, ...]) -> Polynomial:
        if row == size:
            return Polynomial.constant(nvars, ONE)
        key = (row, cols)
        if key not in memo:
            total = Polynomial.zero(nvars)
            for k, col in enumerate(cols):
                entry = matrix[row][col]
                if entry:
                    sub = minor(row + 1, cols[:k] + cols[k + 1:])
                    term = entry * sub
                    total = total - term if k % 2 else total + term
            memo[key] = total
        return memo[key]

    return minor(0, tuple(range(size)))


def hessian_det(spec: HypersurfaceSpec) -> Polynomial:
    """det of the Hessian of F, the product of the block Hessian determinants."""
    result = Polynomial.constant(spec.nvars, ONE)
    for block in spec.blocks:
        matrix = [[p.partial_derivative(j) for j in range(block.nvars)] for p in block.partials]
        det = _polynomial_determinant(matrix, block.nvars)
        result = result * spec._lift(block, det)
    return result

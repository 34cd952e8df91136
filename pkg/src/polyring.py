"""Homogeneous multivariate polynomials with exact coefficients.

A ``Polynomial`` is a sparse map from exponent tuples to nonzero field
elements. Every nonzero polynomial is homogeneous; building an inhomogeneous
one raises ``DegreeMismatch``. Monomial orders come from sympy's
``monomial_key`` and are named "grevlex" or "lex".
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from sympy.polys.orderings import monomial_key

from src.config import MONOMIAL_ORDERS
from src.errors import ArityMismatch, DegreeMismatch, NotDivisible, ParseError
from src.exactfield import ONE, ZERO, CycloNumber, FieldElement, as_field, format_field, zeta_pow

Monomial = tuple[int, ...]

DEFAULT_ORDER = "grevlex"


@lru_cache(maxsize=None)
def order_key(order: str):
    if order not in MONOMIAL_ORDERS:
        raise ValueError(f"Unknown monomial order '{order}', expected one of {MONOMIAL_ORDERS}")
    return monomial_key(order)


@lru_cache(maxsize=4096)
def monomial_basis(nvars: int, degree: int, order: str = DEFAULT_ORDER) -> tuple[Monomial, ...]:
    """All monomials of the given degree, largest first in the monomial order."""
    if degree < 0:
        return ()
    if nvars == 0:
        return ((),) if degree == 0 else ()
    monomials = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        monomials.append(tuple(exps))
    monomials.sort(key=order_key(order), reverse=True)
    return tuple(monomials)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_text(mono: Monomial) -> str:
    parts = []
    for i, e in enumerate(mono):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


class Polynomial:
    """Sparse homogeneous polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "terms", "degree")

    def __init__(self, nvars: int, terms: Mapping[Monomial, FieldElement] | None = None):
        self.nvars = nvars
        clean: dict[Monomial, FieldElement] = {}
        degree = None
        for mono, coeff in (terms or {}).items():
            if len(mono) != nvars:
                raise ArityMismatch(f"Monomial {mono} does not have {nvars} exponents")
            if not coeff:
                continue
            total = sum(mono)
            if degree is None:
                degree = total
            elif total != degree:
                raise DegreeMismatch(f"Inhomogeneous polynomial: degrees {degree} and {total}")
            clean[tuple(mono)] = as_field(coeff)
        self.terms = clean
        self.degree = degree

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): ONE})

    @classmethod
    def monomial(cls, nvars: int, mono: Sequence[int], coeff=ONE) -> "Polynomial":
        return cls(nvars, {tuple(mono): coeff})

    @classmethod
    def from_vector(
        cls, nvars: int, vector: Mapping[int, FieldElement], monomials: Sequence[Monomial]
    ) -> "Polynomial":
        """Inverse of coordinates: column index -> coefficient over a monomial list."""
        return cls(nvars, {monomials[c]: v for c, v in vector.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, mono: Monomial) -> FieldElement:
        return self.terms.get(tuple(mono), ZERO)

    def coordinates(self, index: Mapping[Monomial, int]) -> dict[int, FieldElement]:
        try:
            return {index[m]: c for m, c in self.terms.items()}
        except KeyError as e:
            raise DegreeMismatch(f"Monomial {e.args[0]} is outside the coordinate basis") from e

    def _check(self, other: "Polynomial") -> None:
        if other.nvars != self.nvars:
            raise ArityMismatch(f"Cannot combine polynomials in {self.nvars} and {other.nvars} variables")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction, CycloNumber)):
                other = Polynomial.constant(self.nvars, other)
            else:
                return NotImplemented
        self._check(other)
        if self.degree is not None and other.degree is not None and self.degree != other.degree:
            raise DegreeMismatch(f"Cannot add degree {self.degree} and degree {other.degree}")
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            value = terms.get(mono, ZERO) + coeff
            if value:
                terms[mono] = value
            else:
                terms.pop(mono, None)
        return Polynomial(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (Polynomial, int, Fraction, CycloNumber)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value) -> "Polynomial":
        if not value:
            return Polynomial.zero(self.nvars)
        return Polynomial(self.nvars, {m: c * value for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        terms: dict[Monomial, FieldElement] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = monomial_mul(ma, mb)
                terms[mono] = terms.get(mono, ZERO) + ca * cb
        return Polynomial(self.nvars, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("Negative powers of polynomials are not defined")
        result = Polynomial.constant(self.nvars, ONE)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction, CycloNumber)):
            return self == Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def partial_derivative(self, index: int) -> "Polynomial":
        if not 0 <= index < self.nvars:
            raise ArityMismatch(f"No variable x{index} in {self.nvars} variables")
        terms = {}
        for mono, coeff in self.terms.items():
            e = mono[index]
            if e:
                lowered = list(mono)
                lowered[index] -= 1
                terms[tuple(lowered)] = coeff * e
        return Polynomial(self.nvars, terms)

    def evaluate(self, point: Sequence) -> FieldElement:
        if len(point) != self.nvars:
            raise ArityMismatch(f"Point has {len(point)} coordinates, expected {self.nvars}")
        total = ZERO
        for mono, coeff in self.terms.items():
            value = coeff
            for x, e in zip(point, mono):
                if e:
                    value = value * x**e
            total = total + value
        return total

    def rename_variables(self, offset: int, nvars: int) -> "Polynomial":
        """Embed into ``nvars`` variables, sending x_i to x_{i+offset}."""
        if offset < 0 or offset + self.nvars > nvars:
            raise ArityMismatch(
                f"Cannot place {self.nvars} variables at offset {offset} in {nvars} variables"
            )
        tail = nvars - offset - self.nvars
        return Polynomial(
            nvars, {(0,) * offset + m + (0,) * tail: c for m, c in self.terms.items()}
        )

    def restrict(self, variables: Sequence[int]) -> "Polynomial":
        """Keep the terms supported on ``variables`` and re-index them locally."""
        keep = set(variables)
        terms = {}
        for mono, coeff in self.terms.items():
            if all(e == 0 or i in keep for i, e in enumerate(mono)):
                terms[tuple(mono[i] for i in variables)] = coeff
        return Polynomial(len(variables), terms)

    def leading_term(self, order: str = DEFAULT_ORDER) -> tuple[Monomial, FieldElement]:
        if not self.terms:
            raise ValueError("The zero polynomial has no leading term")
        mono = max(self.terms, key=order_key(order))
        return mono, self.terms[mono]

    def is_rational(self) -> bool:
        return all(not isinstance(c, CycloNumber) or c.is_rational() is not None for c in self.terms.values())

    def to_text(self, order: str = DEFAULT_ORDER) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for mono in sorted(self.terms, key=order_key(order), reverse=True):
            coeff = self.terms[mono]
            mono_text = monomial_text(mono)
            coeff_text = format_field(coeff)
            negative = coeff_text.startswith("-")
            if negative:
                coeff_text = coeff_text[1:]
            if not mono_text:
                body = coeff_text
            elif coeff_text == "1":
                body = mono_text
            else:
                body = f"{coeff_text}*{mono_text}"
            pieces.append((negative, body))
        first_negative, first_body = pieces[0]
        text = ("-" if first_negative else "") + first_body
        for negative, body in pieces[1:]:
            text += (" - " if negative else " + ") + body
        return text

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {self.to_text()!r})"


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b


def poly_scale(a: Polynomial, c) -> Polynomial:
    return a.scale(c)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def partial_derivative(a: Polynomial, index: int) -> Polynomial:
    return a.partial_derivative(index)


def evaluate(a: Polynomial, point: Sequence) -> FieldElement:
    return a.evaluate(point)


def rename_variables(a: Polynomial, offset: int, nvars: int) -> Polynomial:
    return a.rename_variables(offset, nvars)


def divide_exact(a: Polynomial, b: Polynomial, order: str = DEFAULT_ORDER) -> Polynomial:
    """Return q with a = b*q, or raise NotDivisible.

    With a single divisor the division remainder is unique, so the first
    leading term not divisible by LT(b) already proves b does not divide a.
    """
    if b.is_zero():
        raise NotDivisible("Division by the zero polynomial")
    a._check(b)
    lead_mono, lead_coeff = b.leading_term(order)
    quotient: dict[Monomial, FieldElement] = {}
    remainder = a
    while remainder:
        mono, coeff = remainder.leading_term(order)
        if not monomial_divides(lead_mono, mono):
            raise NotDivisible(f"{b} does not divide {a}")
        q_mono = tuple(x - y for x, y in zip(mono, lead_mono))
        q_coeff = coeff / lead_coeff
        quotient[q_mono] = q_coeff
        remainder = remainder - Polynomial.monomial(a.nvars, q_mono, q_coeff) * b
    return Polynomial(a.nvars, quotient)


def pullback(a: Polynomial, substitution: Sequence[Polynomial]) -> Polynomial:
    """Substitute x_i -> substitution[i] (homogeneous forms of a common degree)."""
    if len(substitution) != a.nvars:
        raise ArityMismatch(f"Need {a.nvars} substitutions, got {len(substitution)}")
    if not substitution:
        return a
    target = substitution[0].nvars
    powers: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, e: int) -> Polynomial:
        if (i, e) not in powers:
            powers[(i, e)] = substitution[i] ** e
        return powers[(i, e)]

    result = Polynomial.zero(target)
    for mono, coeff in a.terms.items():
        term = Polynomial.constant(target, coeff)
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
        result = result + term
    return result


def linear_form(nvars: int, coefficients: Mapping[int, FieldElement]) -> Polynomial:
    terms = {}
    for i, c in coefficients.items():
        exps = [0] * nvars
        exps[i] = 1
        terms[tuple(exps)] = c
    return Polynomial(nvars, terms)


def fermat_form(nvars: int, d: int) -> Polynomial:
    return Polynomial(nvars, {tuple(d if j == i else 0 for j in range(nvars)): ONE for i in range(nvars)})


def binary_form_from_roots(roots: Iterable[FieldElement]) -> Polynomial:
    """prod_j (x0 - r_j x1)."""
    result = Polynomial.constant(2, ONE)
    for r in roots:
        result = result * linear_form(2, {0: ONE, 1: -as_field(r)})
    return result


# Text grammar: sums of terms, each a product of rational numbers, x<i> and
# z(<m>) tokens, parentheses, and ^<int> powers.
_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>x(?P<index>\d+))|(?P<zeta>z\(\s*(?P<cond>\d+)\s*\))|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, text: str, nvars: int | None, line: int | None, column_offset: int):
        self.text = text
        self.line = line
        self.column_offset = column_offset
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if not match or match.end() == pos:
                self.error("Unexpected character", pos + (len(text[pos:]) - len(text[pos:].lstrip())))
            start = match.start(match.lastgroup)
            if match.group("num"):
                self.tokens.append(("num", match.group("num"), start))
            elif match.group("var"):
                self.tokens.append(("var", match.group("index"), start))
            elif match.group("zeta"):
                self.tokens.append(("zeta", match.group("cond"), start))
            else:
                self.tokens.append(("op", match.group("op"), start))
            pos = match.end()
        indices = [int(v) for kind, v, _ in self.tokens if kind == "var"]
        inferred = max(indices) + 1 if indices else 0
        if nvars is None:
            nvars = inferred
        elif inferred > nvars:
            self.error(f"Variable x{inferred - 1} outside {nvars} variables", None)
        self.nvars = nvars
        self.pos = 0

    def error(self, message: str, offset: int | None):
        column = None if offset is None else self.column_offset + offset + 1
        raise ParseError(message, self.line, column)

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str, int]:
        token = self.peek()
        if token is None:
            self.error("Unexpected end of input", len(self.text))
        self.pos += 1
        return token

    def expect(self, op: str) -> None:
        kind, value, offset = self.take()
        if kind != "op" or value != op:
            self.error(f"Expected '{op}'", offset)

    def parse(self) -> Polynomial:
        if not self.tokens:
            self.error("Empty polynomial", 0)
        result = self.expression()
        if self.peek() is not None:
            self.error("Unexpected token", self.peek()[2])
        return result

    def expression(self) -> Polynomial:
        sign = ONE
        token = self.peek()
        if token and token[0] == "op" and token[1] in "+-":
            self.take()
            sign = -ONE if token[1] == "-" else ONE
        result = self.combine(None, self.term(), sign, token)
        while True:
            token = self.peek()
            if not token or token[0] != "op" or token[1] not in "+-":
                return result
            self.take()
            result = self.combine(result, self.term(), -ONE if token[1] == "-" else ONE, token)

    def combine(self, left, right: Polynomial, sign, token) -> Polynomial:
        try:
            value = right.scale(sign)
            return value if left is None else left + value
        except DegreeMismatch as e:
            self.error(str(e), token[2] if token else 0)

    def term(self) -> Polynomial:
        result = self.factor()
        while True:
            token = self.peek()
            if not token or token[0] != "op" or token[1] != "*":
                return result
            self.take()
            result = result * self.factor()

    def factor(self) -> Polynomial:
        base = self.atom()
        token = self.peek()
        if token and token[0] == "op" and token[1] == "^":
            self.take()
            sign = ONE
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "-":
                self.take()
                sign = -ONE
            kind, value, offset = self.take()
            if kind != "num":
                self.error("Expected an integer exponent", offset)
            exponent = int(value)
            if sign == -ONE:
                constant = base.terms.get((0,) * self.nvars) if base.degree == 0 else None
                if constant is None:
                    self.error("Negative exponent on a non-constant", offset)
                return Polynomial.constant(self.nvars, (ONE / constant) ** exponent)
            return base**exponent
        return base

    def atom(self) -> Polynomial:
        kind, value, offset = self.take()
        if kind == "num":
            number = Fraction(int(value))
            token = self.peek()
            if token and token[0] == "op" and token[1] == "/":
                self.take()
                kind2, value2, offset2 = self.take()
                if kind2 != "num":
                    self.error("Expected a denominator", offset2)
                if int(value2) == 0:
                    self.error("Zero denominator", offset2)
                number = number / int(value2)
            return Polynomial.constant(self.nvars, number)
        if kind == "var":
            return Polynomial.variable(self.nvars, int(value))
        if kind == "zeta":
            conductor = int(value)
            if conductor < 1:
                self.error("Conductor must be positive", offset)
            return Polynomial.constant(self.nvars, zeta_pow(conductor, 1))
        if value == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        self.error(f"Unexpected '{value}'", offset)


def parse_polynomial(
    text: str, nvars: int | None = None, line: int | None = None, column_offset: int = 0
) -> Polynomial:
    """Parse the polynomial text grammar; ``nvars`` defaults to the largest index + 1."""
    return _Parser(text, nvars, line, column_offset).parse()


def parse_field_element(text: str, line: int | None = None, column_offset: int = 0) -> FieldElement:
    value = parse_polynomial(text, 0, line, column_offset)
    if value.is_zero():
        return ZERO
    if value.degree != 0:
        raise ParseError("Expected a constant", line, column_offset + 1)
    return value.terms[()]

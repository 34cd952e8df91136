"""Exact arithmetic over Q and the cyclotomic fields Q(zeta_m).

Rationals are plain ``fractions.Fraction`` values. A ``CycloNumber`` stores an
element of Q(zeta_m) as its coordinates in the power basis 1, t, ..., t^(phi-1)
modulo the m-th cyclotomic polynomial. Elements with different conductors are
combined by embedding both into Q(zeta_L) with L = lcm, using
zeta_m = zeta_L^(L/m).
"""

from __future__ import annotations

import logging
import threading
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

from src.errors import DivisionByZero

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)

_cyclotomic_cache: dict[int, tuple[int, ...]] = {1: (-1, 1)}
_power_cache: dict[int, tuple[tuple[Fraction, ...], ...]] = {}
_cache_lock = threading.Lock()


def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_divmod(num: Sequence, den: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    """Divide univariate coefficient lists (constant term first) over Q."""
    rem = _trim([Fraction(c) for c in num])
    den = _trim([Fraction(c) for c in den])
    if not den:
        raise DivisionByZero("Polynomial division by zero")
    if len(rem) < len(den):
        return [], rem
    quot = [ZERO] * (len(rem) - len(den) + 1)
    lead = den[-1]
    while len(rem) >= len(den):
        shift = len(rem) - len(den)
        factor = rem[-1] / lead
        quot[shift] = factor
        for i, c in enumerate(den):
            rem[shift + i] -= factor * c
        _trim(rem)
    return _trim(quot), rem


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [ZERO] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


def _divisors(m: int) -> list[int]:
    return [k for k in range(1, m + 1) if m % k == 0]


def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Return the coefficients of Phi_m, constant term first.

    Computed by exact division of t^m - 1 by Phi_k for every proper divisor k
    of m, and memoized.
    """
    if m < 1:
        raise ValueError(f"Conductor must be positive, got {m}")
    with _cache_lock:
        cached = _cyclotomic_cache.get(m)
    if cached is not None:
        return cached

    num: list[Fraction] = [Fraction(-1)] + [ZERO] * (m - 1) + [ONE]
    for k in _divisors(m)[:-1]:
        num, rem = _poly_divmod(num, cyclotomic_polynomial(k))
        if rem:
            raise ArithmeticError(f"Phi_{k} does not divide t^{m} - 1")
    result = tuple(int(c) for c in num)

    with _cache_lock:
        return _cyclotomic_cache.setdefault(m, result)


def totient(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


def _power_table(m: int) -> tuple[tuple[Fraction, ...], ...]:
    """t^k mod Phi_m for k = 0..m-1, as power-basis coordinate tuples."""
    with _cache_lock:
        cached = _power_cache.get(m)
    if cached is not None:
        return cached

    phi = cyclotomic_polynomial(m)
    width = len(phi) - 1
    rows = []
    current = [ONE] + [ZERO] * (width - 1)
    for _ in range(m):
        rows.append(tuple(current))
        shifted = [ZERO] + current
        top = shifted.pop()
        if top:
            for i in range(width):
                shifted[i] -= top * phi[i]
        current = shifted
    table = tuple(rows)

    with _cache_lock:
        return _power_cache.setdefault(m, table)


def _poly_inverse_mod(a: list[Fraction], modulus: list[Fraction]) -> list[Fraction]:
    """Extended Euclid over Q[t]: u with u*a = 1 mod modulus."""
    r0, r1 = list(modulus), _trim(list(a))
    s0: list[Fraction] = []
    s1: list[Fraction] = [ONE]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if len(r0) != 1:
        raise DivisionByZero("Element is not invertible modulo the cyclotomic polynomial")
    scaled = [c / r0[0] for c in s0]
    return _poly_divmod(scaled, modulus)[1]


class CycloNumber:
    """An element of Q(zeta_m) in the power basis modulo Phi_m."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Iterable):
        if conductor < 1:
            raise ValueError(f"Conductor must be positive, got {conductor}")
        values = tuple(Fraction(c) for c in coeffs)
        width = totient(conductor)
        if len(values) != width:
            raise ValueError(
                f"Q(zeta_{conductor}) needs {width} coordinates, got {len(values)}"
            )
        self.conductor = conductor
        self.coeffs = values

    @classmethod
    def rational(cls, value: int | Fraction, conductor: int = 1) -> "CycloNumber":
        width = totient(conductor)
        return cls(conductor, [Fraction(value)] + [ZERO] * (width - 1))

    @classmethod
    def from_powers(cls, conductor: int, powers: dict[int, Fraction]) -> "CycloNumber":
        """Build sum c_k zeta_m^k, reducing exponents mod m and mod Phi_m."""
        table = _power_table(conductor)
        acc = [ZERO] * totient(conductor)
        for k, c in powers.items():
            if not c:
                continue
            for i, v in enumerate(table[k % conductor]):
                if v:
                    acc[i] += c * v
        return cls(conductor, acc)

    def embed(self, conductor: int) -> "CycloNumber":
        """Image of self in Q(zeta_L) for a multiple L of the conductor."""
        if conductor % self.conductor:
            raise ValueError(
                f"Cannot embed Q(zeta_{self.conductor}) into Q(zeta_{conductor})"
            )
        if conductor == self.conductor:
            return self
        step = conductor // self.conductor
        return CycloNumber.from_powers(
            conductor, {k * step: c for k, c in enumerate(self.coeffs) if c}
        )

    def _align(self, other: "CycloNumber") -> tuple[int, tuple, tuple]:
        if other.conductor == self.conductor:
            return self.conductor, self.coeffs, other.coeffs
        target = lcm(self.conductor, other.conductor)
        return target, self.embed(target).coeffs, other.embed(target).coeffs

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> Fraction | None:
        """The rational value of self, or None when it is irrational."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.conductor, (self.coeffs[0] + other,) + self.coeffs[1:])
        if isinstance(other, CycloNumber):
            m, a, b = self._align(other)
            return CycloNumber(m, [x + y for x, y in zip(a, b)])
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.conductor, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.conductor, [c * other for c in self.coeffs])
        if not isinstance(other, CycloNumber):
            return NotImplemented
        m, a, b = self._align(other)
        table = _power_table(m)
        conv: dict[int, Fraction] = {}
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    k = (i + j) % m
                    conv[k] = conv.get(k, ZERO) + x * y
        acc = [ZERO] * len(a)
        for k, c in conv.items():
            if c:
                for i, v in enumerate(table[k]):
                    if v:
                        acc[i] += c * v
        return CycloNumber(m, acc)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise DivisionByZero("Inverse of zero")
        value = self.is_rational()
        if value is not None:
            return CycloNumber.rational(1 / value, self.conductor)
        modulus = [Fraction(c) for c in cyclotomic_polynomial(self.conductor)]
        inv = _poly_inverse_mod(list(self.coeffs), modulus)
        inv += [ZERO] * (len(self.coeffs) - len(inv))
        return CycloNumber(self.conductor, inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("Division by zero")
            return self * (ONE / other)
        if isinstance(other, CycloNumber):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycloNumber.rational(1, self.conductor)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() == other
        if isinstance(other, CycloNumber):
            _, a, b = self._align(other)
            return a == b
        return NotImplemented

    def __hash__(self):
        value = self.is_rational()
        if value is not None:
            return hash(value)
        # Equal irrational values may sit in different conductors.
        return hash("CycloNumber")

    def to_text(self) -> str:
        value = self.is_rational()
        if value is not None:
            return _rational_text(value)
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(_rational_text(c))
                continue
            token = f"z({self.conductor})" + (f"^{k}" if k > 1 else "")
            if c == 1:
                terms.append(token)
            elif c == -1:
                terms.append(f"-{token}")
            else:
                terms.append(f"{_rational_text(c)}*{token}")
        body = terms[0]
        for term in terms[1:]:
            body += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return f"({body})"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"CycloNumber({self.conductor}, {self.to_text()})"


FieldElement = Union[Fraction, CycloNumber]


def _rational_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_field(value) -> FieldElement:
    """Coerce ints to Fraction; leave Fractions and CycloNumbers alone."""
    if isinstance(value, CycloNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise TypeError(f"Not a field element: {value!r}")


def zeta_pow(m: int, k: int) -> CycloNumber:
    """zeta_m^k as an element of Q(zeta_m)."""
    return CycloNumber(m, _power_table(m)[k % m])


def is_rational(value: FieldElement) -> Fraction | None:
    if isinstance(value, CycloNumber):
        return value.is_rational()
    return Fraction(value)


def format_field(value: FieldElement) -> str:
    if isinstance(value, CycloNumber):
        return value.to_text()
    return _rational_text(Fraction(value))


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def negate(a: FieldElement) -> FieldElement:
    return -a


def multiply(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def invert(a: FieldElement) -> FieldElement:
    if isinstance(a, CycloNumber):
        return a.inverse()
    if a == 0:
        raise DivisionByZero("Inverse of zero")
    return ONE / a

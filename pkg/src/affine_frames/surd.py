"""Exact real numbers of the form q1*sqrt(n1) + ... + qk*sqrt(nk).

Square roots of distinct squarefree integers are linearly independent over
the rationals, so a normalized :class:`Surd` is rational exactly when it has
a single term with radicand 1.  Every operation that produces a rational
value returns a :class:`fractions.Fraction` instead of a ``Surd``; an
instance of ``Surd`` is therefore always a genuinely irrational number.
This is what lets the rational/irrational dichotomy in the two-translate
construction be decided without floating point.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import ExactnessError, NumericDomainError

__all__ = ["Surd", "sqrt", "is_exact", "is_rational", "to_exact", "sign"]

_DECIMAL_DIGITS = 60


@lru_cache(maxsize=4096)
def _square_part(n: int) -> tuple[int, int]:
    """Split ``n = s**2 * m`` with ``m`` squarefree; returns ``(s, m)``."""
    if n <= 0:
        raise ValueError(n)
    s, m = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            m *= p
        p += 1 if p == 2 else 2
    return s, m * n


def _normalize(terms: dict[int, Fraction]):
    clean = {r: c for r, c in terms.items() if c != 0}
    if not clean:
        return Fraction(0)
    if len(clean) == 1 and 1 in clean:
        return clean[1]
    return Surd._from_terms(clean)


class Surd:
    __slots__ = ("_terms", "_hash")

    def __init__(self, *args, **kwargs):
        raise TypeError("use affine_frames.surd.sqrt() to build surds")

    @classmethod
    def _from_terms(cls, terms: dict[int, Fraction]) -> "Surd":
        self = object.__new__(cls)
        self._terms = tuple(sorted(terms.items()))
        self._hash = None
        return self

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        """``(radicand, coefficient)`` pairs, radicand 1 is the rational part."""
        return self._terms

    def rational_part(self) -> Fraction:
        return dict(self._terms).get(1, Fraction(0))

    def irrational_part(self) -> dict[int, Fraction]:
        return {r: c for r, c in self._terms if r != 1}

    # arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Surd):
            return dict(other._terms)
        if isinstance(other, (int, Rational)):
            return {1: Fraction(other)}
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) + other
            return NotImplemented
        t = dict(self._terms)
        for r, c in o.items():
            t[r] = t.get(r, Fraction(0)) + c
        return _normalize(t)

    __radd__ = __add__

    def __neg__(self):
        return Surd._from_terms({r: -c for r, c in self._terms})

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, float):
            return float(self) - other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) * other
            if isinstance(other, complex):
                return float(self) * other
            return NotImplemented
        t: dict[int, Fraction] = {}
        for r1, c1 in self._terms:
            for r2, c2 in o.items():
                g = math.gcd(r1, r2)
                r = (r1 // g) * (r2 // g)
                t[r] = t.get(r, Fraction(0)) + c1 * c2 * g
        return _normalize(t)

    __rmul__ = __mul__

    def reciprocal(self):
        if len(self._terms) == 1:
            (r, c), = self._terms
            return Surd._from_terms({r: 1 / (c * r)})
        if len(self._terms) == 2 and self._terms[0][0] == 1:
            # (a + b sqrt n)^-1 = (a - b sqrt n) / (a^2 - n b^2)
            (_, a), (n, b) = self._terms
            return _normalize({1: a, n: -b}) * (1 / (a * a - n * b * b))
        raise ExactnessError(
            "reciprocal of a surd with several radicands is not supported exactly")

    def __truediv__(self, other):
        if isinstance(other, Surd):
            return self * other.reciprocal()
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("surd division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, float):
            return float(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.reciprocal() * Fraction(other)
        if isinstance(other, float):
            return other / float(self)
        return NotImplemented

    # comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Surd):
            return self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return False
        if isinstance(other, float):
            return float(self) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("surd",) + self._terms)
        return self._hash

    def _sign(self) -> int:
        approx = math.fsum(float(c) * math.sqrt(r) for r, c in self._terms)
        scale = math.fsum(abs(float(c)) * math.sqrt(r) for r, c in self._terms)
        if abs(approx) > 1e-9 * scale:
            return 1 if approx > 0 else -1
        with localcontext() as ctx:
            ctx.prec = _DECIMAL_DIGITS
            v = sum(Decimal(c.numerator) / Decimal(c.denominator) * Decimal(r).sqrt()
                    for r, c in self._terms)
        if v == 0:
            raise NumericDomainError("surd sign undecidable at working precision")
        return 1 if v > 0 else -1

    def _cmp(self, other) -> int:
        if isinstance(other, float):
            a = float(self)
            return (a > other) - (a < other)
        d = self - other
        if isinstance(d, Surd):
            return d._sign()
        return (d > 0) - (d < 0)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self._sign() < 0 else self

    # conversions --------------------------------------------------------

    def __float__(self):
        return math.fsum(float(c) * math.sqrt(r) for r, c in self._terms)

    def to_decimal(self, digits: int = _DECIMAL_DIGITS) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits
            return sum(Decimal(c.numerator) / Decimal(c.denominator) * Decimal(r).sqrt()
                       for r, c in self._terms)

    def fractional_part(self) -> float:
        """``x - floor(x)`` evaluated in extended precision."""
        with localcontext() as ctx:
            ctx.prec = _DECIMAL_DIGITS
            v = self.to_decimal()
            return float(v - v.to_integral_value(rounding="ROUND_FLOOR"))

    def __repr__(self):
        parts = []
        for r, c in self._terms:
            parts.append(f"{c}" if r == 1 else f"{c}*sqrt({r})")
        return "Surd(" + " + ".join(parts) + ")"

    def __str__(self):
        parts = []
        for r, c in self._terms:
            if r == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({r})")
            else:
                parts.append(f"{c}*sqrt({r})")
        return " + ".join(parts)


def sqrt(x) -> Fraction | Surd:
    """Exact square root of a nonnegative rational."""
    q = Fraction(x)
    if q < 0:
        raise NumericDomainError(f"sqrt of negative number {q}")
    if q == 0:
        return Fraction(0)
    s, m = _square_part(q.numerator * q.denominator)
    coef = Fraction(s, q.denominator)
    if m == 1:
        return coef
    return Surd._from_terms({m: coef})


def is_exact(x) -> bool:
    return isinstance(x, (int, Rational, Surd)) and not isinstance(x, bool)


def is_rational(x) -> bool:
    return isinstance(x, (int, Rational)) and not isinstance(x, bool)


def to_exact(x) -> Fraction | Surd:
    """Coerce ints, rationals, decimal strings and surds to an exact value."""
    if isinstance(x, Surd):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise ExactnessError(f"{x!r} is not an exact number")


def sign(x) -> int:
    if isinstance(x, Surd):
        return x._sign()
    return (x > 0) - (x < 0)

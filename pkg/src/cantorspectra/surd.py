"""Exact arithmetic on rational combinations of square roots.

A :class:`SurdSum` stores finitely many terms ``c * sqrt(d)`` with rational
coefficients ``c`` and positive integer radicands ``d`` (``d == 1`` is the
rational part).  Two radicands are merged whenever their product is a perfect
square, so within one value each term sits in a distinct square class.  Square
roots of distinct square classes are linearly independent over the rationals,
which makes the zero test exact: a value is zero iff every coefficient is
zero.  Sign determination therefore terminates: a provably nonzero value
separates from zero at some finite enclosure precision.

This covers every number the package manipulates exactly: rationals,
quadratic irrationals such as continued-fraction values of eventually
periodic digit strings, and sums of those from different quadratic fields.
General division is deliberately not supported; only division by rationals
and by values with a single irrational term (via conjugation) is exact here,
and that is all the callers need.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Union

from .errors import ExactArithmeticError

RationalLike = Union[int, Fraction]

# Primes used to peel small square factors out of radicands.  This is an
# optimization only; correctness relies on the pairwise square-product merge.
_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97,
)

_ENCLOSURE_BITS = 128
_MAX_SIGN_BITS = 1 << 16


def _peel_squares(d: int) -> tuple[int, int]:
    """Return (m, s) with d == m * s**2 and m free of small square factors."""
    s = 1
    for p in _SMALL_PRIMES:
        p2 = p * p
        while d % p2 == 0:
            d //= p2
            s *= p
        if p2 > d:
            break
    return d, s


def _sqrt_enclosure(d: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure of sqrt(d) of width 2**-bits."""
    scale = 1 << bits
    s = isqrt(d * scale * scale)
    if s * s == d * scale * scale:
        v = Fraction(s, scale)
        return v, v
    return Fraction(s, scale), Fraction(s + 1, scale)


class SurdSum:
    """Immutable exact value: a rational combination of square roots."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[int, Fraction]] = ()):
        merged: dict[int, Fraction] = {}
        for d, c in terms:
            if c == 0:
                continue
            if d < 0:
                raise ExactArithmeticError("negative radicand")
            if d == 0:
                continue
            m, s = _peel_squares(d)
            c = Fraction(c) * s
            d = m
            for r in merged:
                if r == d:
                    merged[r] += c
                    break
                prod = r * d
                s2 = isqrt(prod)
                if s2 * s2 == prod:
                    # sqrt(d) = (s2 / r) * sqrt(r)
                    merged[r] += c * Fraction(s2, r)
                    break
            else:
                merged[d] = c
        object.__setattr__(self, "_terms", tuple(
            sorted(((d, c) for d, c in merged.items() if c != 0))
        ))

    # -- constructors ------------------------------------------------------

    @classmethod
    def rational(cls, x: RationalLike) -> "SurdSum":
        return cls(((1, Fraction(x)),))

    @classmethod
    def sqrt(cls, x: RationalLike) -> "SurdSum":
        """Exact sqrt of a nonnegative rational."""
        x = Fraction(x)
        if x < 0:
            raise ExactArithmeticError("sqrt of negative rational")
        # sqrt(p/q) = sqrt(p*q)/q
        return cls(((x.numerator * x.denominator, Fraction(1, x.denominator)),))

    @classmethod
    def of(cls, x: Union["SurdSum", RationalLike]) -> "SurdSum":
        if isinstance(x, SurdSum):
            return x
        return cls.rational(x)

    # -- predicates --------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(d == 1 for d, _ in self._terms)

    def as_fraction(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if self.is_rational():
            return self._terms[0][1]
        raise ExactArithmeticError(f"{self!r} is irrational")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return SurdSum(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self):
        return SurdSum(tuple((d, -c) for d, c in self._terms))

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = []
        for d1, c1 in self._terms:
            for d2, c2 in other._terms:
                out.append((d1 * d2, c1 * c2))
        return SurdSum(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return SurdSum(tuple((d, c / Fraction(other)) for d, c in self._terms))
        if isinstance(other, SurdSum):
            return self * other._inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self._inverse()

    def _inverse(self) -> "SurdSum":
        if not self._terms:
            raise ZeroDivisionError("division by zero")
        irrational = [(d, c) for d, c in self._terms if d != 1]
        if not irrational:
            return SurdSum.rational(1 / self._terms[0][1])
        if len(irrational) > 1:
            raise ExactArithmeticError(
                "exact inverse only supported for at most one irrational term"
            )
        d, c = irrational[0]
        a = self.rational_part()
        # 1/(a + c*sqrt(d)) = (a - c*sqrt(d)) / (a^2 - c^2 d)
        denom = a * a - c * c * d
        if denom == 0:
            raise ZeroDivisionError("division by zero")
        return SurdSum(((1, a / denom), (d, -c / denom)))

    def rational_part(self) -> Fraction:
        for d, c in self._terms:
            if d == 1:
                return c
        return Fraction(0)

    # -- enclosures, sign, comparisons --------------------------------------

    def enclosure(self, bits: int = _ENCLOSURE_BITS) -> tuple[Fraction, Fraction]:
        """Rational interval certainly containing the value."""
        lo = hi = Fraction(0)
        for d, c in self._terms:
            if d == 1:
                lo += c
                hi += c
                continue
            slo, shi = _sqrt_enclosure(d, bits)
            if c >= 0:
                lo += c * slo
                hi += c * shi
            else:
                lo += c * shi
                hi += c * slo
        return lo, hi

    def sign(self) -> int:
        if not self._terms:
            return 0
        if self.is_rational():
            c = self._terms[0][1]
            return -1 if c < 0 else 1
        bits = 64
        while bits <= _MAX_SIGN_BITS:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise RuntimeError("sign separation failed; value should be nonzero")

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() < 0

    def __le__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() <= 0

    def __gt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() > 0

    def __ge__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() >= 0

    # Equality is by value across representations, but a representation-
    # independent hash would need full squarefree factorization.  Callers
    # deduplicate via sorting + exact equality instead.
    __hash__ = None  # type: ignore[assignment]

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        lo, hi = self.enclosure(96)
        return float((lo + hi) / 2)

    def __repr__(self) -> str:
        if not self._terms:
            return "SurdSum(0)"
        parts = []
        for d, c in self._terms:
            if d == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({d})")
            else:
                parts.append(f"{c}*sqrt({d})")
        return "SurdSum(" + " + ".join(parts) + ")"

    def decimal(self, digits: int = 15) -> str:
        """Decimal rendering, correct to the requested number of digits."""
        lo, hi = self.enclosure(max(64, 4 * digits))
        mid = (lo + hi) / 2
        scaled = mid * 10**digits
        n = scaled.numerator // scaled.denominator
        sign = "-" if n < 0 else ""
        n = abs(n)
        whole, frac = divmod(n, 10**digits)
        return f"{sign}{whole}.{str(frac).zfill(digits)}"


def _coerce(x) -> SurdSum:
    if isinstance(x, SurdSum):
        return x
    if isinstance(x, (int, Fraction)):
        return SurdSum.rational(x)
    return NotImplemented


ZERO = SurdSum()
ONE = SurdSum.rational(1)

"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Transition-region reductions produce transformation coefficients that solve
a quadratic equation.  Representing them as ``a + b*sqrt(d)`` with rational
``a``, ``b`` keeps the whole substitution pipeline exact.
"""
from __future__ import annotations

import decimal
import math
from fractions import Fraction
from numbers import Rational


def _dec(q: Fraction) -> decimal.Decimal:
    return decimal.Decimal(q.numerator) / decimal.Decimal(q.denominator)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % q for q in range(2, math.isqrt(p) + 1))]


class QuadraticSurd:
    """Number ``a + b*sqrt(d)`` with ``d`` a positive non-square rational.

    Instances are immutable.  Mixing with ``int``/``Fraction`` is supported;
    mixing two surds requires the same radicand.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=2):
        a, b, d = Fraction(a), Fraction(b), Fraction(d)
        if d <= 0 or _rational_sqrt(d) is not None:
            raise ValueError(f"radicand {d} must be a positive non-square")
        # integer radicand with small square factors removed
        n = d.numerator * d.denominator
        b = b / d.denominator
        for p in _SMALL_PRIMES:
            pp = p * p
            if pp > n:
                break
            while n % pp == 0:
                n //= pp
                b *= p
        self.a = a
        self.b = b
        self.d = Fraction(n)

    @classmethod
    def sqrt(cls, q) -> "QuadraticSurd | Fraction":
        """Square root of a non-negative rational, collapsing to Fraction when exact."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        r = _rational_sqrt(q)
        if r is not None:
            return r
        return cls(0, 1, q)

    def _coerce(self, other):
        if isinstance(other, QuadraticSurd):
            if other.d == self.d:
                return other.a, other.b
            r = _rational_sqrt(other.d / self.d)
            if r is None:
                raise ValueError("cannot mix surds from different quadratic fields")
            return other.a, other.b * r
        if isinstance(other, (int, Rational)):
            return Fraction(other), Fraction(0)
        return None

    def _make(self, a, b):
        if b == 0:
            return Fraction(a)
        return QuadraticSurd(a, b, self.d)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._make(self.a + o[0], self.b + o[1])

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._make(self.a - o[0], self.b - o[1])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._make(o[0] - self.a, o[1] - self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = o
        return self._make(self.a * a + self.b * b * self.d, self.a * b + self.b * a)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = o
        if b == 0:
            return self._make(self.a / a, self.b / a)
        den = a * a - b * b * self.d
        return self * QuadraticSurd(a / den, -b / den, self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.conjugate() * (o[0] / self.norm())

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = Fraction(1)
        base = self
        while n:
            if n & 1:
                out = base * out
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadraticSurd):
            if self.a != other.a:
                return False
            if self.d == other.d:
                return self.b == other.b
            return (self.b > 0) == (other.b > 0) and self.b**2 * self.d == other.b**2 * other.d
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b * self.b * self.d, self.b > 0))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        # same-sign parts add without cancellation; otherwise go through the norm
        with decimal.localcontext() as ctx:
            ctx.prec = 60
            root = _dec(self.b) * _dec(self.d).sqrt()
            a = _dec(self.a)
            if (a >= 0) == (root >= 0):
                return float(a + root)
            return float(_dec(self.norm()) / (a - root))

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(d)``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 d
        big = self.a * self.a - self.b * self.b * self.d
        return sa if big > 0 else (sb if big < 0 else 0)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        diff = self - other
        if isinstance(diff, QuadraticSurd):
            return diff.sign()
        return (diff > 0) - (diff < 0)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __repr__(self):
        return f"QuadraticSurd({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt({self.d})"

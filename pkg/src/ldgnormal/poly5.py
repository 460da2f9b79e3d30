"""Exact sparse polynomials in the five order-parameter coordinates.

A :class:`Poly5` maps exponent 5-tuples to coefficients.  Coefficients are
``fractions.Fraction`` in the algebraic pipeline, but any exact or inexact
number type which supports ``+``, ``*`` and comparison with zero works
(``QuadraticSurd`` for transition-region reductions, ``float`` for quick
numerics).

Examples
--------
>>> x1, x4 = Poly5.var(0), Poly5.var(3)
>>> (x1 + x4) * (x1 - x4) == x1**2 - x4**2
True
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Number
from typing import Iterable, Mapping, Sequence

import numpy as np

NVARS = 5
Monomial = tuple  # 5-tuple of non-negative ints

ZERO_EXP = (0,) * NVARS


def _unit(i: int) -> Monomial:
    e = [0] * NVARS
    e[i] = 1
    return tuple(e)


def _add_exp(a: Monomial, b: Monomial) -> Monomial:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3], a[4] + b[4])


def grlex_key(m: Monomial):
    """Sort key for graded lexicographic order (highest first when reversed)."""
    return (sum(m), m)


class Poly5:
    """Immutable sparse polynomial in ``x1..x5``.

    Parameters
    ----------
    terms : mapping, optional
        Monomial exponent tuple -> coefficient.  Zero coefficients are dropped.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    m = tuple(int(e) for e in m)
                    if len(m) != NVARS or min(m) < 0:
                        raise ValueError(f"bad monomial {m}")
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly5":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # -- construction -------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly5":
        return cls({ZERO_EXP: Fraction(c) if isinstance(c, int) else c})

    @classmethod
    def var(cls, i: int) -> "Poly5":
        """The coordinate ``x_{i+1}`` (0-based index)."""
        return cls._raw({_unit(i): Fraction(1)})

    @classmethod
    def coords(cls) -> tuple:
        return tuple(cls.var(i) for i in range(NVARS))

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, m: Monomial):
        return self._terms.get(tuple(m), 0)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def low_degree(self) -> int:
        """Smallest total degree present; ``-1`` for the zero polynomial."""
        return min((sum(m) for m in self._terms), default=-1)

    def sorted_terms(self) -> list:
        """Terms in graded lexicographic order, highest degree first."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def map_coeffs(self, f) -> "Poly5":
        return Poly5({m: f(c) for m, c in self._terms.items()})

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, Poly5):
            return other
        if isinstance(other, Number) or hasattr(other, "__float__"):
            return Poly5.const(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly5._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly5._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "Poly5":
        if not c:
            return Poly5()
        return Poly5({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Poly5):
            return self.mul_trunc(other, None)
        if isinstance(other, Number) or hasattr(other, "__float__"):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def mul_trunc(self, other: "Poly5", n: int | None) -> "Poly5":
        """Product with all terms of total degree above ``n`` discarded."""
        sa, sb = _integer_form(self._terms), _integer_form(other._terms)
        if sa is not None and sb is not None:
            return _mul_integer(sa, sb, n)
        out: dict = {}
        if n is None:
            for ma, ca in self._terms.items():
                for mb, cb in other._terms.items():
                    m = _add_exp(ma, mb)
                    out[m] = out.get(m, 0) + ca * cb
        else:
            bdeg = [(mb, cb, sum(mb)) for mb, cb in other._terms.items()]
            for ma, ca in self._terms.items():
                room = n - sum(ma)
                if room < 0:
                    continue
                for mb, cb, db in bdeg:
                    if db <= room:
                        m = _add_exp(ma, mb)
                        out[m] = out.get(m, 0) + ca * cb
        return Poly5._raw({m: c for m, c in out.items() if c})

    def pow_trunc(self, k: int, n: int | None) -> "Poly5":
        if k < 0:
            raise ValueError("negative power")
        out = Poly5.const(1)
        base = self
        while k:
            if k & 1:
                out = out.mul_trunc(base, n)
            k >>= 1
            if k:
                base = base.mul_trunc(base, n)
        return out

    def __pow__(self, k: int):
        return self.pow_trunc(k, None)

    def truncate(self, n: int) -> "Poly5":
        """Drop all terms of total degree above ``n``."""
        return Poly5._raw({m: c for m, c in self._terms.items() if sum(m) <= n})

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "Poly5(0)"
        return f"Poly5({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # -- calculus and evaluation -------------------------------------
    def diff(self, i: int) -> "Poly5":
        """Partial derivative with respect to ``x_{i+1}``."""
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return Poly5._raw(out)

    def __call__(self, x: Sequence):
        return evaluate(self, x)

    def subs(self, values: Mapping[int, object]) -> "Poly5":
        """Substitute constants for some coordinates (0-based index -> value)."""
        out: dict = {}
        for m, c in self._terms.items():
            mm = list(m)
            for i, v in values.items():
                if mm[i]:
                    c = c * v ** mm[i]
                    mm[i] = 0
            if c:
                key = tuple(mm)
                out[key] = out.get(key, 0) + c
        return Poly5._raw({m: c for m, c in out.items() if c})

    def to_arrays(self):
        """Exponent matrix and float coefficient vector for vectorized evaluation."""
        if not self._terms:
            return np.zeros((0, NVARS), dtype=int), np.zeros(0)
        exps = np.array(list(self._terms.keys()), dtype=int)
        coef = np.array([float(c) for c in self._terms.values()])
        return exps, coef


PolyVec5 = tuple  # 5-tuple of Poly5



def _integer_form(terms: dict):
    """``(numerators, denominator)`` when every coefficient is an int or Fraction."""
    den = 1
    for c in terms.values():
        if type(c) is Fraction:
            d = c.denominator
            if den % d:
                den = den // math.gcd(den, d) * d
        elif type(c) is not int:
            return None
    nums = {}
    for m, c in terms.items():
        nums[m] = c * den if type(c) is int else c.numerator * (den // c.denominator)
    return nums, den


def _mul_integer(a, b, n) -> "Poly5":
    (na, da), (nb, db) = a, b
    out: dict = {}
    bdeg = [(mb, cb, sum(mb)) for mb, cb in nb.items()]
    room_all = n is None
    for ma, ca in na.items():
        room = 0 if room_all else n - sum(ma)
        if room < 0:
            continue
        for mb, cb, dg in bdeg:
            if room_all or dg <= room:
                m = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3], ma[4] + mb[4])
                out[m] = out.get(m, 0) + ca * cb
    den = da * db
    if den == 1:
        return Poly5._raw({m: c for m, c in out.items() if c})
    return Poly5._raw({m: Fraction(c, den) for m, c in out.items() if c})

def polyvec(components: Iterable) -> tuple:
    comps = tuple(c if isinstance(c, Poly5) else Poly5.const(c) for c in components)
    if len(comps) != NVARS:
        raise ValueError("a PolyVec5 has exactly five components")
    return comps


def zero_vec() -> tuple:
    return tuple(Poly5() for _ in range(NVARS))


def vec_add(a, b) -> tuple:
    return tuple(p + q for p, q in zip(a, b))


def vec_scale(a, c) -> tuple:
    """Multiply every component by a scalar or by a polynomial."""
    return tuple(p * c for p in a)


def arith(a: Poly5, b: Poly5, op: str) -> Poly5:
    """Exact ``add``, ``sub`` or ``mul`` of two polynomials."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def grading(p: Poly5, k: int) -> Poly5:
    """Homogeneous part of total degree ``k``."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    return Poly5._raw({m: c for m, c in p.items() if sum(m) == k})


def compose_shift(p: Poly5, h: Sequence[Poly5], n: int) -> Poly5:
    """Return ``p(x + h(x))`` truncated at total degree ``n``.

    Every component of ``h`` must start at degree 2 or higher; the truncation
    is exact since each factor ``x_i + h_i`` has lowest degree one.
    """
    h = polyvec(h)
    for i, hi in enumerate(h):
        if hi and hi.low_degree() < 2:
            raise ValueError(
                f"component {i + 1} of h has a constant or linear part; "
                "the shift must be near-identity")
    if n < 0:
        return Poly5()
    y = [Poly5.var(i) + h[i].truncate(n) for i in range(NVARS)]
    pt = p.truncate(n)
    if not pt:
        return Poly5()
    # cache truncated powers y_i^e
    powers: list[dict] = [dict() for _ in range(NVARS)]

    def ypow(i, e):
        cache = powers[i]
        if e not in cache:
            cache[e] = Poly5.const(1) if e == 0 else ypow(i, e - 1).mul_trunc(y[i], n)
        return cache[e]

    # Horner-like reuse: group monomials by their leading exponents
    prefix_cache: dict = {}

    def prefix(m: tuple) -> Poly5:
        # product of y_i^{m_i} for the exponents listed in m (a prefix tuple)
        if m in prefix_cache:
            return prefix_cache[m]
        if not m:
            val = Poly5.const(1)
        else:
            head = prefix(m[:-1])
            e = m[-1]
            if e == 0:
                val = head
            else:
                # lowest degree of y^m prefix is sum(m); result must fit degree n
                val = head.mul_trunc(ypow(len(m) - 1, e), n)
        prefix_cache[m] = val
        return val

    acc: dict = {}
    for m, c in pt.items():
        term = prefix(m)
        for mm, cc in term.items():
            acc[mm] = acc.get(mm, 0) + c * cc
    return Poly5._raw({m: c for m, c in acc.items() if c})


def gradient(p: Poly5) -> tuple:
    return tuple(p.diff(i) for i in range(NVARS))


def hessian(p: Poly5) -> list:
    g = gradient(p)
    return [[g[i].diff(j) for j in range(NVARS)] for i in range(NVARS)]


def gradient_hessian(p: Poly5):
    """Gradient 5-vector and symmetric 5x5 Hessian of ``p``."""
    return gradient(p), hessian(p)


def evaluate(p: Poly5, x: Sequence):
    """Evaluate at a point; exact when ``x`` holds rationals."""
    if len(x) != NVARS:
        raise ValueError("points have five coordinates")
    total = 0
    cache: dict = {}
    for m, c in p.items():
        v = c
        for i, e in enumerate(m):
            if e:
                key = (i, e)
                if key not in cache:
                    cache[key] = x[i] ** e
                v = v * cache[key]
        total = total + v
    return total


def jacobian(F: Sequence[Poly5]) -> list:
    return [[Fi.diff(j) for j in range(NVARS)] for Fi in F]


class CompiledPoly:
    """Float evaluator of a polynomial with its gradient and Hessian.

    Built once from an exact :class:`Poly5`; all 31 polynomials share one
    monomial table so each evaluation costs a single vectorized product.
    """

    def __init__(self, p: Poly5):
        self.poly = p
        g = gradient(p)
        h = [[g[i].diff(j) for j in range(NVARS)] for i in range(NVARS)]
        polys = [p] + list(g) + [h[i][j] for i in range(NVARS) for j in range(NVARS)]
        mons = sorted({m for q in polys for m in q.terms})
        index = {m: k for k, m in enumerate(mons)}
        self._exps = np.array(mons, dtype=np.int64).reshape(-1, NVARS)
        self._deg = int(self._exps.max()) if len(mons) else 0
        coef = np.zeros((len(polys), len(mons)))
        for r, q in enumerate(polys):
            for m, c in q.items():
                coef[r, index[m]] = float(c)
        self._coef = coef
        live = np.nonzero(coef[0])[0]
        self._vexps, self._vcoef = self._exps[live], coef[0, live]

    def _monomials(self, x, exps) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        powers = np.cumprod(np.vstack([np.ones(NVARS), np.tile(x, (self._deg, 1))]), axis=0)
        cols = np.arange(NVARS)
        return np.prod(powers[exps, cols], axis=1)

    def _all(self, x) -> np.ndarray:
        if self._exps.shape[0] == 0:
            return np.zeros(self._coef.shape[0])
        return self._coef @ self._monomials(x, self._exps)

    def value(self, x) -> float:
        if self._vexps.shape[0] == 0:
            return 0.0
        return float(self._vcoef @ self._monomials(x, self._vexps))

    def grad(self, x) -> np.ndarray:
        return self._all(x)[1:1 + NVARS]

    def hess(self, x) -> np.ndarray:
        return self._all(x)[1 + NVARS:].reshape(NVARS, NVARS)

    def value_grad_hess(self, x):
        v = self._all(x)
        return float(v[0]), v[1:1 + NVARS], v[1 + NVARS:].reshape(NVARS, NVARS)

"""Landau-deGennes potentials on the invariant basis.

Every invariant polynomial of degree <= 8 without constant term is a unique
combination of the nine products

    T2, T3, T2^2, T2*T3, T2^3, T3^2, T2^2*T3, T2*T3^2, T2^4

because the invariant ring is freely generated by ``T2`` and ``T3``.  This
ordering is fixed and used by every coefficient report.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .poly5 import NVARS, Poly5, grading
from .so3rep import invariants

BASIS = (
    ("T2", (1, 0)),
    ("T3", (0, 1)),
    ("T2^2", (2, 0)),
    ("T2*T3", (1, 1)),
    ("T2^3", (3, 0)),
    ("T3^2", (0, 2)),
    ("T2^2*T3", (2, 1)),
    ("T2*T3^2", (1, 2)),
    ("T2^4", (4, 0)),
)
BASIS_NAMES = tuple(n for n, _ in BASIS)
BASIS_EXPONENTS = tuple(e for _, e in BASIS)
_NAME_INDEX = {n: i for i, n in enumerate(BASIS_NAMES)}
_EXP_INDEX = {e: i for i, e in enumerate(BASIS_EXPONENTS)}

MAX_DEGREE = 8


def basis_degree(i: int) -> int:
    a, b = BASIS_EXPONENTS[i]
    return 2 * a + 3 * b


class NotInvariantError(ValueError):
    """Raised when a polynomial is not a combination of the T-basis."""

    def __init__(self, message: str, residual: Poly5):
        super().__init__(message)
        self.residual = residual


class RegimeError(ValueError):
    """A reduction was requested outside its regime (``c1 = 0`` or ``c2 = 0``)."""


def parse_rational(v) -> Fraction:
    """Fraction from int, Fraction, ``"num/den"`` strings or decimal strings."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    s = str(v).strip().replace("−", "-")
    return Fraction(s)


def format_rational(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class LdGCoefficients:
    """Coefficients ``c1..c9`` of the Landau-deGennes potential.

    ``c7, c8, c9`` multiply the order-8 terms and default to zero.
    """

    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)
    c3: Fraction = Fraction(0)
    c4: Fraction = Fraction(0)
    c5: Fraction = Fraction(0)
    c6: Fraction = Fraction(0)
    c7: Fraction = Fraction(0)
    c8: Fraction = Fraction(0)
    c9: Fraction = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, Fraction):
                object.__setattr__(self, f.name, parse_rational(v))

    @classmethod
    def from_sequence(cls, values: Sequence) -> "LdGCoefficients":
        if len(values) > 9:
            raise ValueError("at most nine coefficients")
        return cls(*[parse_rational(v) for v in values])

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f"c{i}") for i in range(1, 10))

    def __getitem__(self, i: int) -> Fraction:
        """1-based access: ``c[1]`` is ``c1``."""
        return self.as_tuple()[i - 1]

    def replace(self, **kw) -> "LdGCoefficients":
        vals = {f"c{i}": v for i, v in enumerate(self.as_tuple(), 1)}
        vals.update({k: parse_rational(v) for k, v in kw.items()})
        return LdGCoefficients(**vals)

    @property
    def is_order6(self) -> bool:
        return self.c7 == 0 and self.c8 == 0 and self.c9 == 0

    @property
    def regular(self) -> bool:
        return self.c1 != 0

    @property
    def singular_ok(self) -> bool:
        return self.c2 != 0

    def to_json(self) -> dict:
        return {f"c{i}": format_rational(v) for i, v in enumerate(self.as_tuple(), 1)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "LdGCoefficients":
        unknown = set(obj) - {f"c{i}" for i in range(1, 10)}
        if unknown:
            raise ValueError(f"unknown coefficient keys {sorted(unknown)}")
        return cls(**{k: parse_rational(v) for k, v in obj.items()})

    def expansion(self) -> "InvariantExpansion":
        return InvariantExpansion(self.as_tuple())


class InvariantExpansion:
    """Coefficients of an invariant polynomial on the fixed T-basis.

    Coefficients are normally ``Fraction``; transition-region reductions may
    carry ``QuadraticSurd`` values.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence = ()):
        c = list(coeffs) + [Fraction(0)] * (len(BASIS) - len(coeffs))
        if len(c) != len(BASIS):
            raise ValueError(f"expected {len(BASIS)} coefficients")
        self._c = tuple(Fraction(v) if isinstance(v, int) else v for v in c)

    @classmethod
    def from_names(cls, named: Mapping) -> "InvariantExpansion":
        c = [Fraction(0)] * len(BASIS)
        for k, v in named.items():
            c[_NAME_INDEX[k]] = v
        return cls(c)

    @classmethod
    def from_exponents(cls, d: Mapping) -> "InvariantExpansion":
        c = [Fraction(0)] * len(BASIS)
        for ab, v in d.items():
            if ab not in _EXP_INDEX:
                raise ValueError(f"T2^{ab[0]} T3^{ab[1]} is outside the degree-8 basis")
            c[_EXP_INDEX[ab]] = v
        return cls(c)

    @property
    def coefficients(self) -> tuple:
        return self._c

    def __getitem__(self, key):
        if isinstance(key, str):
            return self._c[_NAME_INDEX[key]]
        return self._c[key]

    def __iter__(self):
        return iter(self._c)

    def __len__(self):
        return len(self._c)

    def by_exponents(self) -> dict:
        return {e: v for e, v in zip(BASIS_EXPONENTS, self._c)}

    def nonzero(self) -> dict:
        return {n: v for n, v in zip(BASIS_NAMES, self._c) if v}

    def __sub__(self, other: "InvariantExpansion") -> "InvariantExpansion":
        return InvariantExpansion([a - b for a, b in zip(self._c, other._c)])

    def __add__(self, other: "InvariantExpansion") -> "InvariantExpansion":
        return InvariantExpansion([a + b for a, b in zip(self._c, other._c)])

    def is_zero(self) -> bool:
        return not any(self._c)

    def __eq__(self, other):
        if not isinstance(other, InvariantExpansion):
            return NotImplemented
        return all(a == b for a, b in zip(self._c, other._c))

    def __hash__(self):
        return hash(self._c)

    def degree(self) -> int:
        return max((basis_degree(i) for i, v in enumerate(self._c) if v), default=-1)

    def leading(self) -> "InvariantExpansion":
        """Keep only the terms of maximal degree."""
        d = self.degree()
        return InvariantExpansion([v if basis_degree(i) == d else Fraction(0)
                                   for i, v in enumerate(self._c)])

    def to_json(self) -> dict:
        out = {}
        for n, v in zip(BASIS_NAMES, self._c):
            out[n] = format_rational(v) if isinstance(v, (int, Fraction)) else str(v)
        return out

    def __repr__(self):
        inner = ", ".join(f"{n}: {v}" for n, v in self.nonzero().items())
        return f"InvariantExpansion({{{inner}}})"


@lru_cache(maxsize=None)
def basis_polynomials(restrict_diagonal: bool = False) -> tuple:
    """Expanded T-basis polynomials, optionally restricted to ``x2=x3=x5=0``."""
    t2, t3 = invariants()
    if restrict_diagonal:
        t2, t3 = restrict_to_diagonal(t2), restrict_to_diagonal(t3)
    powers2 = [Poly5.const(1)]
    powers3 = [Poly5.const(1)]
    for _ in range(4):
        powers2.append(powers2[-1] * t2)
    for _ in range(2):
        powers3.append(powers3[-1] * t3)
    return tuple(powers2[a] * powers3[b] for a, b in BASIS_EXPONENTS)


def restrict_to_diagonal(p: Poly5) -> Poly5:
    """Restriction to diagonal matrices ``x2 = x3 = x5 = 0``."""
    return Poly5({m: c for m, c in p.items() if m[1] == 0 and m[2] == 0 and m[4] == 0})


def build_potential(c: LdGCoefficients, order: int = 6) -> Poly5:
    """``sum_i c_i * basis_i`` expanded in the x-coordinates."""
    if order not in (6, 8):
        raise ValueError("order is 6 or 8")
    if order == 6 and not c.is_order6:
        raise ValueError("order 6 requires c7 = c8 = c9 = 0")
    return expand(c.expansion())


def expand(e: InvariantExpansion, restrict_diagonal: bool = False) -> Poly5:
    """Polynomial represented by an invariant expansion."""
    out = Poly5()
    for v, b in zip(e, basis_polynomials(restrict_diagonal)):
        if v:
            out = out + b.scale(v)
    return out


@lru_cache(maxsize=None)
def _pivots(restrict_diagonal: bool) -> dict:
    """Per degree: (basis indices, pivot monomials) giving an invertible system."""
    polys = basis_polynomials(restrict_diagonal)
    out = {}
    for d in range(2, MAX_DEGREE + 1):
        idx = [i for i in range(len(BASIS)) if basis_degree(i) == d]
        if len(idx) == 1:
            i = idx[0]
            m = max(polys[i].terms, key=lambda mm: mm)  # any monomial of the element
            out[d] = (idx, [m])
        else:
            i, j = idx
            # choose a pair of monomials with nonzero 2x2 determinant
            mons = sorted(set(polys[i].terms) | set(polys[j].terms))
            found = None
            for a in range(len(mons)):
                for b in range(a + 1, len(mons)):
                    ma, mb = mons[a], mons[b]
                    det = (polys[i].coeff(ma) * polys[j].coeff(mb)
                           - polys[j].coeff(ma) * polys[i].coeff(mb))
                    if det:
                        found = [ma, mb]
                        break
                if found:
                    break
            out[d] = (idx, found)
    return out


def decompose_invariant(p: Poly5, restrict_diagonal: bool = False) -> InvariantExpansion:
    """Exact coefficients of ``p`` on the T-basis.

    The linear system is solved on pivot monomials degree by degree; the
    full residual ``p - expansion`` must then vanish identically, otherwise
    :class:`NotInvariantError` is raised with the residual attached.

    With ``restrict_diagonal=True`` the input is read as the restriction of
    an invariant to diagonal matrices; restriction is injective on
    invariants, so the coefficients are still unique but non-invariance in
    the off-diagonal directions is not detected.
    """
    if p.degree() > MAX_DEGREE:
        raise ValueError(f"degree {p.degree()} exceeds the basis cap {MAX_DEGREE}")
    low = grading(p, 0) + grading(p, 1)
    if low:
        raise NotInvariantError("constant or linear part present", low)
    polys = basis_polynomials(restrict_diagonal)
    coeffs = [Fraction(0)] * len(BASIS)
    for d, (idx, mons) in _pivots(restrict_diagonal).items():
        if len(idx) == 1:
            i, m = idx[0], mons[0]
            v = p.coeff(m)
            if v:
                coeffs[i] = v / polys[i].coeff(m)
        else:
            i, j = idx
            ma, mb = mons
            a11, a12 = polys[i].coeff(ma), polys[j].coeff(ma)
            a21, a22 = polys[i].coeff(mb), polys[j].coeff(mb)
            r1, r2 = p.coeff(ma), p.coeff(mb)
            det = a11 * a22 - a12 * a21
            if r1 or r2:
                coeffs[i] = (r1 * a22 - a12 * r2) / det
                coeffs[j] = (a11 * r2 - a21 * r1) / det
    e = InvariantExpansion(coeffs)
    residual = p - expand(e, restrict_diagonal)
    if residual:
        raise NotInvariantError("polynomial is not invariant", residual)
    return e


def qomega_form(e: InvariantExpansion):
    """Rewrite with ``T2 = q^2``, ``T3 = (1 - w) q^3 / sqrt(6)``; collected in ``q``.

    Returns a sympy expression in the symbols ``q`` and ``omega``.
    """
    import sympy as sp

    q, w = sp.symbols("q omega")
    t2 = q**2
    t3 = (1 - w) * q**3 / sp.sqrt(6)
    expr = 0
    for (a, b), v in e.by_exponents().items():
        if v:
            coef = sp.Rational(v.numerator, v.denominator) if isinstance(v, Fraction) \
                else sp.nsimplify(float(v))
            expr += coef * t2**a * t3**b
    return sp.collect(sp.expand(expr), q)


@dataclass(frozen=True)
class ConvexityResult:
    convex: bool
    degree: int
    min_value: float
    witness_omega: float | None
    witness_t3_sign: int | None


ATTAINABLE = "attainable"


def convexity_check(e: InvariantExpansion, omega_min=0) -> ConvexityResult:
    """Is the maximal-degree part strictly positive for all q > 0, omega in [omega_min, 1]?

    ``omega_min = ATTAINABLE`` restricts to ``omega >= 1 - 2 sqrt(2)/3``, the
    range actually reached by real points (``T3^2 <= 4 T2^3 / 27``).

    Both signs of ``T3`` are examined (``T3 -> -T3`` under ``x -> -x``), so
    any odd leading part fails.  The witness is a minimizing ``omega`` and
    sign when the check fails.
    """
    import sympy as sp

    lead = e.leading()
    d = lead.degree()
    if d < 0:
        return ConvexityResult(False, d, 0.0, 0.0, 1)
    # y = T3 / T2^(3/2) = +-(1 - omega)/sqrt(6) keeps the coefficients rational
    y = sp.symbols("y", real=True)
    lo = 1 - 2 * sp.sqrt(2) / 3 if omega_min == ATTAINABLE else sp.nsimplify(omega_min)
    Y = (1 - lo) / sp.sqrt(6)
    f = 0
    for (a, b), v in lead.by_exponents().items():
        if v:
            coef = sp.Rational(v.numerator, v.denominator) if isinstance(v, Fraction) \
                else sp.nsimplify(float(v))
            f += coef * y**b
    f = sp.expand(f)
    cands = [-Y, sp.Integer(0), Y]
    df = sp.diff(f, y)
    if df != 0:
        for r in sp.Poly(df, y).real_roots():
            if -Y <= r <= Y:
                cands.append(r)
    best = None
    for cnd in cands:
        val = float(f.subs(y, cnd))
        if best is None or val < best[0]:
            wv = float(1 - sp.sqrt(6) * abs(cnd))
            best = (val, wv, -1 if cnd < 0 else 1)
    convex = best[0] > 0
    return ConvexityResult(convex, d, best[0],
                           None if convex else best[1], None if convex else best[2])

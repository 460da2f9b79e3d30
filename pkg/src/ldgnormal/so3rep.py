"""The SO(3) adjoint action on symmetric traceless 3x3 matrices.

Coordinates: ``Q = [[x1, x2, x3], [x2, x4, x5], [x3, x5, -(x1 + x4)]]``.
The module provides the generators, the basic invariants ``T2``/``T3``,
the fixed catalog of covariant fields through degree 8, exact covariance
and invariance checks, Molien counting and the orbit-space data.

Two normalizations of the invariants appear in practice: the explicit
polynomials ``T2``, ``T3`` returned by :func:`invariants` and the traces
``Tr Q^2 = 2*T2``, ``Tr Q^3 = 3*T3``.  Both are exposed; nothing here
silently converts between them.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .poly5 import NVARS, Poly5, evaluate, gradient, polyvec

__all__ = [
    "GeneratorSet", "CovariantField", "OrbitPoint", "CATALOG",
    "generators", "commutator", "invariants", "trace_invariants",
    "qmatrix", "from_qmatrix", "lie_derivative", "covariant", "catalog",
    "check_covariance", "molien_series", "independent_count",
    "invariant_space_dimension", "covariant_space_dimension",
    "orbit_geometry", "isotropy_residual", "discrete_symmetry_check",
    "orbit_space_structures",
]

_L = (
    ((0, 0, 0), (0, 0, -1), (0, 1, 0)),
    ((0, 0, 1), (0, 0, 0), (-1, 0, 0)),
    ((0, -1, 0), (1, 0, 0), (0, 0, 0)),
)

_J = (
    ((0, 0, 0, 0, 0),
     (0, 0, -1, 0, 0),
     (0, 1, 0, 0, 0),
     (0, 0, 0, 0, -2),
     (1, 0, 0, 2, 0)),
    ((0, 0, 2, 0, 0),
     (0, 0, 0, 0, 1),
     (-2, 0, 0, -1, 0),
     (0, 0, 0, 0, 0),
     (0, -1, 0, 0, 0)),
    ((0, -2, 0, 0, 0),
     (1, 0, 0, -1, 0),
     (0, 0, 0, 0, -1),
     (0, 2, 0, 0, 0),
     (0, 0, 1, 0, 0)),
)


@dataclass(frozen=True)
class GeneratorSet:
    """Integer generator matrices of so(3) (3x3) and of its 5-dim adjoint image."""

    so3: tuple
    adjoint: tuple


def generators() -> GeneratorSet:
    return GeneratorSet(
        so3=tuple(np.array(m, dtype=np.int64) for m in _L),
        adjoint=tuple(np.array(m, dtype=np.int64) for m in _J),
    )


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


# -- invariants -----------------------------------------------------------

@lru_cache(maxsize=None)
def invariants() -> tuple:
    """The explicit cubic and quadratic invariants ``(T2, T3)``."""
    x1, x2, x3, x4, x5 = Poly5.coords()
    t2 = x1**2 + x2**2 + x3**2 + x4**2 + x5**2 + x1 * x4
    t3 = x1 * (x2**2 - x4**2 - x5**2) - x4 * (x1**2 - x2**2 + x3**2) + 2 * x2 * x3 * x5
    return t2, t3


def trace_invariants() -> tuple:
    """``(Tr Q^2, Tr Q^3)`` as polynomials: ``(2*T2, 3*T3)``."""
    t2, t3 = invariants()
    return t2.scale(2), t3.scale(3)


def qmatrix(x: Sequence) -> np.ndarray:
    """Symmetric traceless matrix of a coordinate 5-tuple."""
    x1, x2, x3, x4, x5 = x
    dtype = float if any(isinstance(v, float) for v in x) else object
    return np.array([[x1, x2, x3], [x2, x4, x5], [x3, x5, -(x1 + x4)]], dtype=dtype)


def from_qmatrix(Q, tol: float = 1e-12) -> tuple:
    """Coordinates of a symmetric traceless matrix; rejects anything else."""
    Q = np.asarray(Q)
    if Q.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    exact = Q.dtype == object or np.issubdtype(Q.dtype, np.integer)
    asym = [Q[i, j] - Q[j, i] for i in range(3) for j in range(i + 1, 3)]
    tr = Q[0, 0] + Q[1, 1] + Q[2, 2]
    if exact:
        if any(a != 0 for a in asym):
            raise ValueError("matrix is not symmetric")
        if tr != 0:
            raise ValueError("matrix is not traceless")
    else:
        scale = max(1.0, float(np.max(np.abs(Q))))
        if max(abs(float(a)) for a in asym) > tol * scale:
            raise ValueError("matrix is not symmetric")
        if abs(float(tr)) > tol * scale:
            raise ValueError("matrix is not traceless")
    return (Q[0, 0], Q[0, 1], Q[0, 2], Q[1, 1], Q[1, 2])


def _action_field(a: int) -> tuple:
    """Linear vector field ``J_a x`` as a PolyVec5 (``a`` in 1..3)."""
    if a not in (1, 2, 3):
        raise ValueError("generator index must be 1, 2 or 3")
    J = _J[a - 1]
    xs = Poly5.coords()
    out = []
    for i in range(NVARS):
        comp = Poly5()
        for j in range(NVARS):
            if J[i][j]:
                comp = comp + xs[j].scale(Fraction(J[i][j]))
        out.append(comp)
    return tuple(out)


def lie_derivative(p: Poly5, a: int) -> Poly5:
    """Infinitesimal action ``grad(p) . (J_a x)``."""
    v = _action_field(a)
    out = Poly5()
    for gi, vi in zip(gradient(p), v):
        if gi and vi:
            out = out + gi * vi
    return out


# -- covariants -----------------------------------------------------------

CATALOG = (
    "F1", "F2", "F3", "F4_1", "F4_2", "F5_1", "F5_2", "F6_1", "F6_2",
    "F7_1", "F7_2", "F7_3", "F8_1", "F8_2", "F8_3",
)

# label -> (T2 power, T3 power, base field) with base 'x' or 'F2'
_RECIPE = {
    "F1": (0, 0, "x"), "F2": (0, 0, "F2"), "F3": (1, 0, "x"),
    "F4_1": (0, 1, "x"), "F4_2": (1, 0, "F2"),
    "F5_1": (2, 0, "x"), "F5_2": (0, 1, "F2"),
    "F6_1": (1, 1, "x"), "F6_2": (2, 0, "F2"),
    "F7_1": (3, 0, "x"), "F7_2": (0, 2, "x"), "F7_3": (1, 1, "F2"),
    "F8_1": (2, 1, "x"), "F8_2": (3, 0, "F2"), "F8_3": (0, 2, "F2"),
}


@dataclass(frozen=True)
class CovariantField:
    label: str
    degree: int
    field: tuple = field(repr=False)
    t2_power: int = 0
    t3_power: int = 0
    base: str = "x"


def _normalize_label(label: str) -> str:
    s = str(label).replace("(", "_").replace(")", "").replace("^", "_").replace("__", "_")
    s = s.upper().rstrip("_")
    if s not in _RECIPE:
        raise KeyError(f"unknown covariant label {label!r}; catalog is {CATALOG}")
    return s


@lru_cache(maxsize=None)
def _f2() -> tuple:
    x1, x2, x3, x4, x5 = Poly5.coords()
    return polyvec((
        (x1**2 + x2**2 + x3**2) - 2 * (x1 * x4 + x4**2 + x5**2),
        3 * (x1 * x2 + x2 * x4 + x3 * x5),
        3 * (x2 * x5 - x3 * x4),
        (x2**2 + x4**2 + x5**2) - 2 * (x1**2 + x3**2 + x1 * x4),
        3 * (x2 * x3 - x1 * x5),
    ))


@lru_cache(maxsize=None)
def covariant(label: str) -> CovariantField:
    """Catalog covariant by label, e.g. ``"F2"`` or ``"F7_3"``."""
    key = _normalize_label(label)
    a, b, base = _RECIPE[key]
    t2, t3 = invariants()
    vec = Poly5.coords() if base == "x" else _f2()
    mult = t2**a * t3**b
    fieldv = tuple(v * mult for v in vec)
    deg = 2 * a + 3 * b + (1 if base == "x" else 2)
    return CovariantField(key, deg, fieldv, a, b, base)


def catalog(degree: int | None = None) -> list:
    out = [covariant(lbl) for lbl in CATALOG]
    if degree is not None:
        out = [f for f in out if f.degree == degree]
    return out


def check_covariance(F) -> tuple:
    """Exact check of ``DF(x) J_a x = J_a F(x)`` for ``a = 1, 2, 3``.

    ``F`` is a :class:`CovariantField` or any 5-tuple of polynomials.
    Returns ``(ok, residuals)`` with one residual PolyVec5 per generator.
    """
    vec = F.field if isinstance(F, CovariantField) else polyvec(F)
    residuals = []
    for a in (1, 2, 3):
        J = _J[a - 1]
        res = []
        for i in range(NVARS):
            r = lie_derivative(vec[i], a)
            for j in range(NVARS):
                if J[i][j]:
                    r = r - vec[j].scale(Fraction(J[i][j]))
            res.append(r)
        residuals.append(tuple(res))
    ok = all(not r for res in residuals for r in res)
    return ok, residuals


# -- Molien counting ------------------------------------------------------

def _series_divide(num: Sequence[int], den: Sequence[int], n: int) -> list:
    """Power-series quotient ``num/den`` through ``t**n`` (``den[0] == 1``)."""
    if den[0] != 1:
        raise ValueError("denominator must have constant term 1")
    out = []
    for k in range(n + 1):
        v = num[k] if k < len(num) else 0
        for j in range(1, min(k, len(den) - 1) + 1):
            v -= den[j] * out[k - j]
        out.append(v)
    return out


def molien_series(target: str, max_degree: int) -> list:
    """Series coefficients of the Molien function for invariants or covariants.

    ``1/((1-t^2)(1-t^3))`` for invariants, ``(t+t^2)/((1-t^2)(1-t^3))`` for
    covariants, expanded by exact series division.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    den = [1, 0, -1, -1, 0, 1]  # (1 - t^2)(1 - t^3)
    if target in ("invariants", "invariant"):
        num = [1]
    elif target in ("covariants", "covariant"):
        num = [0, 1, 1]
    else:
        raise ValueError("target is 'invariants' or 'covariants'")
    return _series_divide(num, den, max_degree)


def _exact_rank(rows: list) -> int:
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix

    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    dm = DomainMatrix([[QQ(int(c.numerator), int(c.denominator)) for c in r] for r in rows],
                      (len(rows), len(rows[0])), QQ)
    return dm.rank()


def _flatten_coeffs(vecs: list) -> list:
    """Rows of monomial coefficients for a list of PolyVec5 (or Poly5)."""
    keys = set()
    norm = []
    for v in vecs:
        v = v if isinstance(v, tuple) else (v,)
        norm.append(v)
        for i, comp in enumerate(v):
            keys.update((i, m) for m in comp.terms)
    keys = sorted(keys)
    return [[Fraction(v[i].coeff(m)) for i, m in keys] for v in norm]


def independent_count(degree: int, target: str) -> int:
    """Exact rank of the degree-``degree`` invariant products or catalog covariants."""
    if not 1 <= degree <= 8:
        raise ValueError("degree must be in 1..8")
    t2, t3 = invariants()
    if target in ("invariants", "invariant"):
        polys = [t2**a * t3**b for a in range(degree // 2 + 1)
                 for b in range(degree // 3 + 1) if 2 * a + 3 * b == degree]
        return _exact_rank(_flatten_coeffs(polys)) if polys else 0
    if target in ("covariants", "covariant"):
        fields = [f.field for f in catalog(degree)]
        return _exact_rank(_flatten_coeffs(fields)) if fields else 0
    raise ValueError("target is 'invariants' or 'covariants'")


def _monomials(degree: int) -> list:
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for e in range(left, -1, -1):
            rec(prefix + [e], left - e, slots - 1)

    rec([], degree, NVARS)
    return out


def _kernel_dimension(rows: list, ncols: int) -> int:
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix

    if not rows:
        return ncols
    dm = DomainMatrix([[QQ(v) for v in r] for r in rows], (len(rows), ncols), QQ)
    return ncols - dm.rank()


def invariant_space_dimension(degree: int) -> int:
    """Dimension of all degree-``degree`` polynomials killed by the three Lie derivatives.

    Independent of the catalog: solves the linear invariance conditions over
    the full monomial basis.
    """
    mons = _monomials(degree)
    index = {m: i for i, m in enumerate(mons)}
    rows: dict = {}
    for col, m in enumerate(mons):
        for a in (1, 2, 3):
            ld = lie_derivative(Poly5({m: Fraction(1)}), a)
            for mm, c in ld.items():
                rows.setdefault((a, mm), [0] * len(mons))[col] += int(c)
    return _kernel_dimension(list(rows.values()), len(mons))


def covariant_space_dimension(degree: int) -> int:
    """Dimension of all homogeneous covariant fields of the given degree.

    Solves ``DF J_a x - J_a F = 0`` over the full monomial basis
    (``5 * #monomials`` unknowns); practical through degree 5 or so.
    """
    mons = _monomials(degree)
    ncols = NVARS * len(mons)
    rows: dict = {}
    for comp in range(NVARS):
        for k, m in enumerate(mons):
            col = comp * len(mons) + k
            F = [Poly5() for _ in range(NVARS)]
            F[comp] = Poly5({m: Fraction(1)})
            _, residuals = check_covariance(tuple(F))
            for a, res in enumerate(residuals):
                for i, r in enumerate(res):
                    for mm, c in r.items():
                        rows.setdefault((a, i, mm), [0] * ncols)[col] += int(c)
    return _kernel_dimension(list(rows.values()), ncols)


# -- orbit geometry -------------------------------------------------------

@dataclass(frozen=True)
class OrbitPoint:
    """Invariants of a point with both biaxiality conventions side by side.

    ``omega_paper`` applies ``1 - sqrt(6 T3^2 / T2^3)`` to the explicit
    invariants; ``omega_trace`` applies it to ``(Tr Q^2, Tr Q^3)``.  Only the
    trace version vanishes exactly on uniaxial states.  For the explicit
    version the attainable range is ``[1 - 2*sqrt(2)/3, 1]``.
    """

    t2: object
    t3: object
    q: float
    omega_paper: float | None
    omega_trace: float | None
    isotropic: bool = False
    omega_valid: bool = True


def _omega(t2, t3) -> float:
    r = 6 * t3 * t3 / (t2 * t2 * t2)
    return 1.0 - math.sqrt(float(r))


def orbit_geometry(x: Sequence) -> OrbitPoint:
    t2p, t3p = invariants()
    t2 = evaluate(t2p, x)
    t3 = evaluate(t3p, x)
    if t2 == 0:
        return OrbitPoint(t2, t3, 0.0, None, None, isotropic=True, omega_valid=False)
    q = math.sqrt(float(t2))
    wp = _omega(t2, t3)
    wt = _omega(2 * t2, 3 * t3)
    # rounding can push the trace value a hair below zero on uniaxial inputs
    if -1e-12 < wt < 0:
        wt = 0.0
    valid = 0.0 <= wt <= 1.0
    return OrbitPoint(t2, t3, q, wp, wt, isotropic=False, omega_valid=valid)


def isotropy_residual(l1, l2, convention: str = "trace"):
    """``T2^3 - 6 T3^2 - 2 (l1-l2)^2 (2 l1+l2)^2 (l1+2 l2)^2`` at ``diag(l1, l2, -l1-l2)``.

    Zero for every ``(l1, l2)`` in the trace convention; nonzero in the
    explicit convention.
    """
    t2p, t3p = invariants()
    x = (l1, 0, 0, l2, 0)
    t2, t3 = evaluate(t2p, x), evaluate(t3p, x)
    if convention == "trace":
        t2, t3 = 2 * t2, 3 * t3
    elif convention != "explicit":
        raise ValueError("convention is 'trace' or 'explicit'")
    rhs = 2 * (l1 - l2) ** 2 * (2 * l1 + l2) ** 2 * (l1 + 2 * l2) ** 2
    return t2**3 - 6 * t3**2 - rhs


_DISCRETE = (
    lambda x: (x[3], x[1], x[4], x[0], x[2]),
    lambda x: (x[3], x[1], -x[4], x[0], -x[2]),
    lambda x: (x[0], -x[1], -x[2], x[3], x[4]),
    lambda x: (x[0], -x[1], x[2], x[3], -x[4]),
)


def _substitute(p: Poly5, images: tuple) -> Poly5:
    out = Poly5()
    for m, c in p.items():
        term = Poly5.const(c)
        for i, e in enumerate(m):
            if e:
                term = term * images[i] ** e
        out = out + term
    return out


def discrete_symmetry_check(expansions=None, n_points: int = 10, seed: int = 0) -> bool:
    """Verify the coordinate symmetries of ``T2``/``T3`` and the invariant line.

    Exact part: ``T2`` and ``T3`` are unchanged under the listed coordinate
    substitutions.  Sampled part: for each invariant polynomial in
    ``expansions`` (defaults to all products ``T2^a T3^b`` through degree 8)
    the gradient at random rational points of ``{x2=x3=x5=0, x4=x1}`` is
    tangent to that line.
    """
    t2, t3 = invariants()
    xs = Poly5.coords()
    for sym in _DISCRETE:
        img = sym(xs)
        if _substitute(t2, img) != t2 or _substitute(t3, img) != t3:
            return False
    if expansions is None:
        expansions = [t2**a * t3**b for a in range(5) for b in range(3)
                      if 0 < 2 * a + 3 * b <= 8]
    rng = random.Random(seed)
    for p in expansions:
        g = gradient(p)
        for _ in range(n_points):
            s = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
            pt = (s, 0, 0, s, 0)
            gv = [evaluate(gi, pt) for gi in g]
            if gv[1] != 0 or gv[2] != 0 or gv[4] != 0 or gv[0] != gv[3]:
                return False
    return True


# -- orbit space (metric, P-matrix, homological operator) -------------------

ORBIT_METRIC = (
    (Fraction(4, 3), 0, 0, Fraction(-2, 3), 0),
    (0, 1, 0, 0, 0),
    (0, 0, 1, 0, 0),
    (Fraction(-2, 3), 0, 0, Fraction(4, 3), 0),
    (0, 0, 0, 0, 1),
)


@dataclass(frozen=True)
class OrbitSpace:
    c1: object
    metric: tuple

    @staticmethod
    def pi(t2, t3) -> tuple:
        """Orbit-space matrix ``[[4 T2, 6 T3], [6 T3, 4/3 T2^2]]``."""
        return ((4 * t2, 6 * t3), (6 * t3, Fraction(4, 3) * t2 * t2))

    def L0(self, expansion):
        """Homological operator ``4 c1 T2 d/dT2`` on an invariant expansion.

        Accepts a mapping ``{(a, b): coeff}`` for ``T2^a T3^b`` or an
        ``InvariantExpansion``; returns the same kind.
        """
        if hasattr(expansion, "by_exponents"):
            from .landau import InvariantExpansion

            out = {ab: 4 * self.c1 * ab[0] * v for ab, v in expansion.by_exponents().items()}
            return InvariantExpansion.from_exponents(out)
        return {ab: 4 * self.c1 * ab[0] * v for ab, v in expansion.items()}

    def gram(self) -> tuple:
        """Exact Gram matrix of the invariant gradients under the metric."""
        t2, t3 = invariants()
        grads = (gradient(t2), gradient(t3))
        out = [[None, None], [None, None]]
        for a in range(2):
            for b in range(2):
                acc = Poly5()
                for i in range(NVARS):
                    for j in range(NVARS):
                        mij = self.metric[i][j]
                        if mij and grads[a][i] and grads[b][j]:
                            acc = acc + (grads[a][i] * grads[b][j]).scale(Fraction(mij))
                out[a][b] = acc
        return tuple(tuple(r) for r in out)


def orbit_space_structures(c1=Fraction(1)) -> OrbitSpace:
    return OrbitSpace(c1=c1, metric=ORBIT_METRIC)

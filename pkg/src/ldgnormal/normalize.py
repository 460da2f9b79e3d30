"""Near-identity covariant changes of variables that simplify LdG potentials.

The shift is ``h = k1 F2 + k2 F3 + k3 F4_1 + ... + k11 F7_3``.  Closed-form
coefficients are provided for the regular regime (``c1 != 0``) at orders six
and eight and for the transition region (``c2 != 0``, no division by ``c1``).
Every closed form is checked against an order-by-order oracle that only
uses substitution, and every reduction is verified by substitution before it
is reported.

Substitution runs by default on the diagonal slice ``x2 = x3 = x5 = 0``:
covariant fields map the slice into itself and the restriction of an
invariant to the slice determines it, so the slice computation gives the
same T-basis coefficients as the five-variable one at a fraction of the
cost.  ``method="full"`` performs the five-variable substitution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .landau import (BASIS_NAMES, InvariantExpansion, LdGCoefficients, RegimeError,
                     decompose_invariant, expand, format_rational, restrict_to_diagonal)
from .poly5 import NVARS, Poly5, compose_shift
from .so3rep import covariant
from .surd import QuadraticSurd

GENERATORS = ("F2", "F3", "F4_1", "F4_2", "F5_1", "F5_2",
              "F6_1", "F6_2", "F7_1", "F7_2", "F7_3")
NK = len(GENERATORS)

# |c1 / c2^2| below this: the printed series is the reference for k2, k4
SERIES_THRESHOLD = Fraction(1, 10**4)
# series and exact values are compared up to this |c1 / c2^2|
SERIES_BAND_TOP = Fraction(1, 10**3)
SERIES_ORDER = 10

FORM_PATTERNS = {
    "LANDRED6": ("T2", "T2^3"),
    "LANDRED8A": ("T2", "T2^4"),
    "LANDRED8B": ("T2", "T2^4", "T2*T3^2"),
    "RP6A": ("T2", "T3", "T2^2", "T3^2"),
    "RP6B": ("T2", "T3", "T2^2", "T2^3"),
    "RP6BOTH": ("T2", "T3", "T2^2", "T3^2", "T2^3"),
    "RP8A": ("T2", "T3", "T2^2", "T2^3", "T2*T3^2"),
    "RP8B": ("T2", "T3", "T2^2", "T3^2", "T2^4"),
}


def format_exact(v):
    """JSON-safe exact representation: ``"num/den"`` or ``"a + b*sqrt(d)"``."""
    if isinstance(v, QuadraticSurd):
        return (f"{format_rational(v.a)} + {format_rational(v.b)}"
                f"*sqrt({format_rational(v.d)})")
    if isinstance(v, float):
        return format_float(v)
    return format_rational(v)


def format_float(v: float):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return float(format(v, ".17g"))


def _as_float(v) -> float:
    return float(v)


# -- transformation coefficients --------------------------------------------------

@dataclass(frozen=True)
class TransformCoefficients:
    """Scalars ``k1..k11`` paired with the generators in :data:`GENERATORS`."""

    k: tuple = (Fraction(0),) * NK
    free_k4: Fraction = Fraction(0)
    free_k8: Fraction = Fraction(0)

    def __post_init__(self):
        k = tuple(self.k) + (Fraction(0),) * (NK - len(self.k))
        if len(k) != NK:
            raise ValueError(f"at most {NK} coefficients")
        object.__setattr__(self, "k", tuple(Fraction(v) if isinstance(v, int) else v for v in k))

    @classmethod
    def from_mapping(cls, d: Mapping[int, object], **kw) -> "TransformCoefficients":
        k = [Fraction(0)] * NK
        for i, v in d.items():
            k[i - 1] = v
        return cls(tuple(k), **kw)

    def __getitem__(self, i: int):
        """1-based: ``ks[1]`` is ``k1``."""
        return self.k[i - 1]

    def replace(self, updates: Mapping[int, object]) -> "TransformCoefficients":
        k = list(self.k)
        for i, v in updates.items():
            k[i - 1] = v
        return TransformCoefficients(tuple(k), self.free_k4, self.free_k8)

    def is_zero(self) -> bool:
        return not any(self.k)

    def to_json(self) -> dict:
        out = {f"k{i}": format_exact(v) for i, v in enumerate(self.k, 1)}
        out["free_k4"] = format_rational(self.free_k4)
        out["free_k8"] = format_rational(self.free_k8)
        return out


def generator_degree(i: int) -> int:
    """Polynomial degree of the generator multiplying ``k_i``."""
    return covariant(GENERATORS[i - 1]).degree


@lru_cache(maxsize=None)
def _generator_fields(restrict_diagonal: bool) -> tuple:
    out = []
    for lbl in GENERATORS:
        f = covariant(lbl).field
        if restrict_diagonal:
            f = tuple(restrict_to_diagonal(c) for c in f)
        out.append(f)
    return tuple(out)


def build_h(ks: TransformCoefficients, restrict_diagonal: bool = False) -> tuple:
    """The shift ``h(x) = sum_i k_i * generator_i`` as a PolyVec5."""
    comps = [Poly5() for _ in range(NVARS)]
    for v, f in zip(ks.k, _generator_fields(restrict_diagonal)):
        if v:
            for j in range(NVARS):
                if f[j]:
                    comps[j] = comps[j] + f[j].scale(v)
    return tuple(comps)


def transformed_expansion(expansion: InvariantExpansion, ks: TransformCoefficients,
                          order: int, method: str = "diagonal") -> InvariantExpansion:
    """T-basis coefficients of ``Phi(x + h(x))`` truncated at ``order``."""
    if method not in ("diagonal", "full"):
        raise ValueError("method is 'diagonal' or 'full'")
    diag = method == "diagonal"
    p = expand(expansion, restrict_diagonal=diag)
    q = compose_shift(p, build_h(ks, restrict_diagonal=diag), order)
    return decompose_invariant(q, restrict_diagonal=diag)


# -- reduced forms and reports ---------------------------------------------------

@dataclass
class ReducedPotential:
    """Named reduced form with its surviving coefficients.

    ``pinned`` lists the coefficients the form fixes in advance (for example
    ``T2^3 = 1``); all coefficients outside the form's pattern must vanish.
    """

    form: str
    surviving: InvariantExpansion
    pinned: dict = field(default_factory=dict)
    validity_radius: float = math.inf

    def claim_residual(self) -> InvariantExpansion:
        allowed = set(FORM_PATTERNS[self.form])
        res = []
        for name, v in zip(BASIS_NAMES, self.surviving):
            if name not in allowed:
                res.append(v)
            elif name in self.pinned:
                res.append(v - self.pinned[name])
            else:
                res.append(Fraction(0))
        return InvariantExpansion(res)


@dataclass
class Comparison:
    """One printed-formula versus oracle/substitution comparison."""

    quantity: str
    printed: object
    reference: object
    match: bool
    kind: str = "exact"
    note: str = ""

    def to_json(self) -> dict:
        def fmt(v):
            if v is None:
                return None
            if isinstance(v, (Fraction, int, QuadraticSurd)):
                return format_exact(v)
            return format_float(float(v))
        return {"quantity": self.quantity, "kind": self.kind, "printed": fmt(self.printed),
                "reference": fmt(self.reference), "match": bool(self.match), "note": self.note}


@dataclass
class ReductionReport:
    input: LdGCoefficients
    order: int
    regime: str
    ks: TransformCoefficients
    reduced: ReducedPotential
    residual: InvariantExpansion
    extras: dict = field(default_factory=dict)
    comparisons: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    method: str = "diagonal"

    @property
    def verified(self) -> bool:
        return self.residual.is_zero()

    def to_json(self, config: Mapping | None = None) -> dict:
        from . import __version__
        out = {
            "tool": {"name": "ldgnormal", "version": __version__},
            "config": dict(config) if config is not None else None,
            "input": self.input.to_json(),
            "order": self.order,
            "regime": self.regime,
            "method": self.method,
            "ks": self.ks.to_json(),
            "form": self.reduced.form,
            "surviving": _expansion_json(self.reduced.surviving),
            "verified": self.verified,
            "residual": _expansion_json(self.residual),
            "validity_radius": format_float(self.reduced.validity_radius),
            "extras": {k: format_exact(v) for k, v in self.extras.items()},
            "comparisons": [c.to_json() for c in self.comparisons],
            "notes": list(self.notes),
        }
        return out


def _expansion_json(e: InvariantExpansion) -> dict:
    return {n: format_exact(v) for n, v in zip(BASIS_NAMES, e)}


def validity_estimate(c: LdGCoefficients | None, ks: TransformCoefficients) -> float:
    """Radius ``min_m |k_m|^(-1/(deg_m - 1))`` at which a correction reaches unit size."""
    best = math.inf
    for i, v in enumerate(ks.k, 1):
        mag = abs(float(v)) if v else 0.0
        if mag > 0:
            best = min(best, mag ** (-1.0 / (generator_degree(i) - 1)))
    return best


def apply_transform(c: LdGCoefficients, ks: TransformCoefficients, order: int,
                    form: str | None = None, pinned: Mapping | None = None,
                    method: str = "diagonal", regime: str = "regular") -> ReductionReport:
    """Substitute ``x -> x + h(x)``, decompose, and compare with the claimed form.

    Without ``form`` the claim is the identity: every coefficient is free.
    """
    out = transformed_expansion(c.expansion(), ks, order, method)
    if form is None:
        reduced = ReducedPotential("IDENTITY", out)
        residual = InvariantExpansion()
    else:
        reduced = ReducedPotential(form, out, dict(pinned or {}))
        residual = reduced.claim_residual()
    reduced.validity_radius = validity_estimate(c, ks)
    return ReductionReport(c, order, regime, ks, reduced, residual, method=method)


FORM_PATTERNS["IDENTITY"] = BASIS_NAMES


# -- oracle ---------------------------------------------------------------------

class UnreachableTarget(ValueError):
    """The affine system of an oracle step is singular with nonzero offset."""


def _solve_linear(A: list, b: list) -> list:
    """Exact Gaussian elimination; raises on a singular square system."""
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise UnreachableTarget("target unreachable at this order (singular system)")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [a - f * bb for a, bb in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


@dataclass(frozen=True)
class OracleStep:
    """Unknown directions in k-space and the coefficient targets they must meet.

    Each direction maps k-indices to weights; the unknown ``t_j`` moves the
    k's by ``t_j * direction_j``.  A plain index ``i`` means the unit vector.
    """

    directions: tuple
    targets: tuple  # ((basis name, value), ...)

    @classmethod
    def make(cls, unknowns: Iterable, targets: Mapping) -> "OracleStep":
        dirs = []
        for u in unknowns:
            dirs.append(((u, Fraction(1)),) if isinstance(u, int)
                        else tuple((int(i), Fraction(w)) for i, w in dict(u).items()))
        return cls(tuple(dirs), tuple((n, Fraction(v)) for n, v in targets.items()))


def _shift(ks: TransformCoefficients, directions, t) -> TransformCoefficients:
    upd = {}
    for d, tj in zip(directions, t):
        for i, w in d:
            upd[i] = upd.get(i, ks[i]) + w * tj
    return ks.replace(upd)


def oracle_solve(c: LdGCoefficients, order: int, plan: Sequence[OracleStep],
                 frozen: Mapping[int, object] | None = None,
                 method: str = "diagonal") -> TransformCoefficients:
    """Order-by-order solve of ``plan`` by pure substitution.

    At each step the targets are affine in the step's unknowns; the affine
    map is recovered from substitutions at ``t = 0`` and ``t = e_j``, checked
    at ``t = 2 * (e_1 + ... + e_n)``, and solved exactly.
    """
    frozen = dict(frozen or {})
    ks = TransformCoefficients().replace({i: Fraction(v) for i, v in frozen.items()})
    base = c.expansion()

    def targets_at(k: TransformCoefficients, names):
        e = transformed_expansion(base, k, order, method)
        return [e[n] for n in names]

    for step in plan:
        names = [n for n, _ in step.targets]
        goal = [v for _, v in step.targets]
        n = len(step.directions)
        if len(names) != n:
            raise ValueError("each oracle step needs as many targets as unknowns")
        f0 = targets_at(ks, names)
        cols = []
        for j in range(n):
            t = [Fraction(0)] * n
            t[j] = Fraction(1)
            fj = targets_at(_shift(ks, step.directions, t), names)
            cols.append([a - b for a, b in zip(fj, f0)])
        A = [[cols[j][r] for j in range(n)] for r in range(n)]
        two = [Fraction(2)] * n
        fchk = targets_at(_shift(ks, step.directions, two), names)
        pred = [f0[r] + sum(A[r][j] * 2 for j in range(n)) for r in range(n)]
        if fchk != pred:
            raise RuntimeError(f"targets {names} are not affine in the step unknowns")
        rhs = [g - f for g, f in zip(goal, f0)]
        t = _solve_linear(A, rhs)
        ks = _shift(ks, step.directions, t)
    return ks


def regular_plan(order: int, mode: str = "full") -> list:
    """Oracle steps for the regular reductions (``k4`` and, in xi-only mode, ``k8`` frozen)."""
    steps = [OracleStep.make([1], {"T3": 0}),
             OracleStep.make([2], {"T2^2": 0}),
             OracleStep.make([3], {"T2*T3": 0})]
    if order == 6:
        steps.append(OracleStep.make([5, 6], {"T2^3": 1, "T3^2": 0}))
        return steps
    steps.append(OracleStep.make([5, 6], {"T2^3": 0, "T3^2": 0}))
    if mode == "full":
        steps.append(OracleStep.make([7, 8, 9], {"T2^2*T3": 0, "T2^4": 1, "T2*T3^2": 0}))
    elif mode == "xi_only":
        steps.append(OracleStep.make([7], {"T2^2*T3": 0}))
        steps.append(OracleStep.make([9], {"T2^4": 1}))
    else:
        raise ValueError("mode is 'full' or 'xi_only'")
    return steps


def singular8_plan(case: str) -> list:
    """Oracle steps for the order-8 transition-region forms."""
    if case == "a":
        return [OracleStep.make([2, 3], {"T2*T3": 0, "T3^2": 0}),
                OracleStep.make([5, 7, 8], {"T2^2*T3": 0, "T2*T3^2": 1, "T2^4": 0})]
    if case == "b":
        return [OracleStep.make([2], {"T2*T3": 0}),
                OracleStep.make([{3: 1, 4: Fraction(-2, 9)}], {"T2^3": 0}),
                OracleStep.make([6, 7, 8], {"T2^2*T3": 0, "T2*T3^2": 0, "T2^4": 1})]
    raise ValueError("order-8 singular case is 'a' or 'b'")


# -- printed closed forms: regular regime --------------------------------------------

def _cs(c: LdGCoefficients):
    return c.as_tuple()


def printed_regular6(c: LdGCoefficients, k4) -> dict:
    c1, c2, c3, c4, c5, c6, *_ = _cs(c)
    k4 = Fraction(k4)
    return {
        "k1": -c2 / (9 * c1),
        "k2": (5 * c2**2 - 27 * c1 * c3) / (54 * c1**2),
        "k3": (-8 * c2**3 + 81 * c1 * c2 * c3 - 27 * c1**2 * c4 - 243 * c1**3 * k4) / (54 * c1**3),
        "alpha": (-29 * c2**4 + 558 * c1 * c2**2 * c3 - 1701 * c1**2 * c3**2
                  - 216 * c1**2 * c2 * c4 + 972 * c1**3 * c5 + 1296 * c1**3 * c2 * k4)
                 / (972 * c1**3),
        "beta": (-c2**4 + 12 * c1 * c2**2 * c3 - 6 * c1**2 * c2 * c4 + 3 * c1**3 * c6
                 - 27 * c1**3 * c2 * k4) / (3 * c1**3),
        "k5": (29 * c2**4 - 558 * c1 * c2**2 * c3 + 27 * c1**2 * (63 * c3**2 + 8 * c2 * c4)
               + 324 * c1**3 * (3 - 3 * c5 - 4 * c2 * k4)) / (1944 * c1**4),
        "k6": (c2**4 - 12 * c1 * c2**2 * c3 - 3 * c1**3 * c6
               + 3 * c1**2 * c2 * (2 * c4 + 9 * c1 * k4)) / (27 * c1**4),
    }


def printed_regular8(c: LdGCoefficients, k4, k8_xi=Fraction(0)) -> dict:
    """Printed order-8 expressions.

    Entries ending in ``_of`` are functions of the not-yet-fixed k's.
    """
    c1, c2, c3, c4, c5, c6, c7, c8, c9 = _cs(c)
    k4 = Fraction(k4)
    out = {}
    out["k5"] = (29 * c2**4 - 558 * c1 * c2**2 * c3 + 243 * c1**2 * (7 * c3**2 - 4 * c1 * c5)
                 - 216 * c1**2 * c2 * (-c4 + 6 * c1 * k4)) / (1944 * c1**4)
    out["k6"] = (c2**4 - 12 * c1 * c2**2 * c3 - 3 * c1**3 * c6
                 + 3 * c1**2 * c2 * (2 * c4 + 9 * c1 * k4)) / (27 * c1**4)

    def gamma_general(k):
        k1, k2, k3, k4_, k5, k6, k7, k8 = (k[i] for i in range(1, 9))
        return (c7 + 27 * c5 * k1 + 4 * c6 * k1 + 30 * c4 * k1**2 + 54 * c3 * k1**3
                + 5 * c4 * k2 + 54 * c3 * k1 * k2 + 9 * c2 * k1**2 * k2 + 3 * c2 * k2**2
                + 4 * c3 * k3 + 4 * c2 * k1 * k3 + 2 * c1 * k2 * k3 + 18 * c3 * k4_
                + 18 * c2 * k1 * k4_ + 9 * c1 * k2 * k4_ + 3 * c2 * k5 + 9 * c1 * k1 * k5
                + 2 * c2 * k6 + 6 * c1 * k1 * k6 + 2 * c1 * k7 + 9 * c1 * k8)

    def gamma_reduced(k7, k8):
        return (112 * c2**5 - 2160 * c1 * c2**3 * c3 + 1080 * c1**2 * c2**2 * c4
                - 54 * c1**2 * c2 * (-135 * c3**2 + 54 * c1 * c5 + 8 * c1 * c6)
                + 729 * c1**3 * (-4 * c3 * c4 + c1 * (c7 + 2 * c1 * k7 + 9 * c1 * k8))) \
            / (729 * c1**4)

    def k7_of(k8):
        return (-112 * c2**5 + 2160 * c1 * c2**3 * c3 - 1080 * c1**2 * c2**2 * c4
                + 54 * c1**2 * c2 * (-135 * c3**2 + 54 * c1 * c5 + 8 * c1 * c6)
                - 729 * c1**3 * (-4 * c3 * c4 + c1 * (c7 + 9 * c1 * k8))) / (1458 * c1**5)

    def xi_of(k8, k9):
        return (3609 * c1 * c2**4 * c3
                + 27 * c1**2 * c2**2 * (516 * c1 * c5 + 32 * c1 * c6 - 1149 * c3**2)
                + 24 * c1**2 * c2**3 * (342 * c1 * k4 - 85 * c4)
                + 1944 * c1**3 * c2 * (7 * c3 * c4 - 2 * c1 * c7 - 48 * c1 * c3 * k4
                                       + 12 * c1**2 * k8)
                + 2187 * c1**3 * (33 * c3**3 - 36 * c1 * c3 * c5
                                  + 8 * c1**2 * (c9 + 2 * c4 * k4 + 3 * c1 * k4**2 + 2 * c1 * k9))
                - 101 * c2**6) / (17496 * c1**5)

    def eta_numerator(k8):
        return (5886 * c1 * c2**4 * c3 - 266 * c2**6
                + 243 * c1**2 * c2**2 * (28 * c1 * c5 + 6 * c1 * c6 - 113 * c3**2)
                - 18 * c1**2 * c2**3 * (172 * c4 + 171 * c1 * k4)
                + 243 * c1**4 * (-9 * c4**2 - 18 * c3 * c6 - 54 * c1 * c4 * k4
                                 + c1 * (4 * c8 - 81 * c1 * k4**2))
                + 1458 * c1**3 * c2 * (c3 * (13 * c4 + 24 * c1 * k4) - 2 * c1 * (c7 + 3 * c1 * k8)))

    def eta_xi_numerator(k8):
        return (-266 * c2**6 + 5886 * c1 * c2**4 * c3
                + 243 * c1**2 * c2**2 * (-113 * c3**2 + 28 * c1 * c5 + 6 * c1 * c6)
                - 18 * c1**2 * c2**3 * (172 * c4 + 171 * c1 * k4)
                + 243 * c1**4 * (-9 * c4**2 - 18 * c3 * c6 - 54 * c1 * c4 * k4
                                 + c1 * (4 * c8 - 81 * c1 * k4**2))
                - 1458 * c1**3 * c2 * (-c3 * (13 * c4 + 24 * c1 * k4) + 2 * c1 * (c7 + 3 * c1 * k8)))

    out["gamma_general_of"] = gamma_general
    out["gamma_reduced_of"] = gamma_reduced
    out["k7_of"] = k7_of
    out["xi_of"] = xi_of
    out["eta_971_of"] = lambda k8: eta_numerator(k8) / (971 * c1**5)
    out["eta_972_of"] = lambda k8: eta_numerator(k8) / (972 * c1**5)
    out["eta_xi_of"] = lambda k8: eta_xi_numerator(k8) / (972 * c1**5)
    if c2:
        out["k8_full"] = (5886 * c1 * c2**4 * c3
                          - c1**2 * c2**2 * (27459 * c3**2 + 3096 * c2 * c4)
                          + c1**3 * c2 * (18954 * c3 * c4 + 6804 * c2 * c5 + 1458 * c2 * c6
                                          - 3078 * c2**2 * k4)
                          - c1**4 * (2187 * c4**2 + 4374 * c3 * c6 + 2916 * c2 * c7
                                     - 34992 * c2 * c3 * k4)
                          + c1**5 * (972 * c8 - 13122 * c4 * k4) - 19683 * c1**6 * k4**2
                          - 266 * c2**6) / (8748 * c1**5 * c2)
    out["k9_full"] = (-57915 * c1 * c2**4 * c3
                      + c1**2 * c2**2 * (312741 * c3**2 + 30888 * c2 * c4)
                      - c1**3 * (216513 * c3**3 + 192456 * c2 * c3 * c4 + 96228 * c2**2 * c5
                                 + 14256 * c2**2 * c6)
                      + c1**4 * (17496 * c4**2 + 236196 * c3 * c5 + 34992 * (c3 * c6 + c2 * c7))
                      + c1**5 * (52488 * (1 - c9) - 7776 * c8) + 2431 * c2**6) / (104976 * c1**6)
    k8x = Fraction(k8_xi)
    out["k9_xi"] = (101 * c2**6 - 3609 * c1 * c2**4 * c3
                    + 3 * c1**2 * c2**2 * (10341 * c3**2 + 680 * c2 * c4)
                    + 972 * c1**4 * (81 * c3 * c5 + 4 * c2 * c7 + 96 * c2 * c3 * k4)
                    - 27 * c1**3 * (2673 * c3**3 + 504 * c2 * c3 * c4
                                    + 4 * c2**2 * (129 * c5 + 8 * c6 + 76 * c2 * k4))
                    - 52488 * c1**6 * k4**2
                    - 5832 * c1**5 * (-3 + 3 * c9 + 6 * c4 * k4 + 4 * c2 * k8x)) / (34992 * c1**6)
    return out


def _require_regular(c: LdGCoefficients):
    if c.c1 == 0:
        raise RegimeError("c1 = 0: the regular reduction divides by c1 and needs c1 != 0; "
                          "use the singular (transition-region) reduction instead")


@dataclass
class ClosedFormResult:
    ks: TransformCoefficients
    extras: dict
    comparisons: list
    form: str
    pinned: dict
    notes: list = field(default_factory=list)


def _cmp(name, printed, ref, note="") -> Comparison:
    return Comparison(name, printed, ref, printed == ref, "exact", note)


def regular_coefficients_order6(c: LdGCoefficients, k4=Fraction(0),
                                method: str = "diagonal") -> ClosedFormResult:
    """Printed ``k1..k6``, ``alpha``, ``beta`` for the order-6 form ``c1 T2 + T2^3``.

    The oracle is run alongside; on disagreement its values are used.
    """
    _require_regular(c)
    if not c.is_order6:
        raise ValueError("order-6 reduction requires c7 = c8 = c9 = 0")
    k4 = Fraction(k4)
    pr = printed_regular6(c, k4)
    oracle = oracle_solve(c, 6, regular_plan(6), {4: k4}, method)
    # alpha, beta: order-6 coefficients after k1..k4 only
    after4 = transformed_expansion(c.expansion(), oracle.replace({5: 0, 6: 0}), 6, method)
    comps = [_cmp(f"k{i}", pr[f"k{i}"], oracle[i]) for i in (1, 2, 3, 5, 6)]
    comps.append(_cmp("alpha", pr["alpha"], after4["T2^3"]))
    comps.append(_cmp("beta", pr["beta"], after4["T3^2"]))
    return ClosedFormResult(oracle, {"alpha": after4["T2^3"], "beta": after4["T3^2"]},
                            comps, "LANDRED6", {"T2": c.c1, "T2^3": Fraction(1)})


def regular_coefficients_order8(c: LdGCoefficients, k4=Fraction(0), mode: str = "full",
                                k8_free=Fraction(0), method: str = "diagonal") -> ClosedFormResult:
    """Order-8 regular reduction to ``c1 T2 + T2^4`` (full) or ``+ eta T2 T3^2`` (xi_only)."""
    _require_regular(c)
    if mode not in ("full", "xi_only"):
        raise ValueError("mode is 'full' or 'xi_only'")
    if mode == "full" and c.c2 == 0:
        raise RegimeError("c2 = 0: the full order-8 reduction has a c2 denominator; "
                          "use mode xi_only")
    k4 = Fraction(k4)
    k8_free = Fraction(k8_free)
    frozen = {4: k4, 10: 0, 11: 0}
    if mode == "xi_only":
        frozen[8] = k8_free
    try:
        oracle = oracle_solve(c, 8, regular_plan(8, mode), frozen, method)
    except UnreachableTarget as exc:
        raise RegimeError(f"order-8 {mode} reduction unreachable for this record: {exc}") from exc
    pr = printed_regular8(c, k4, k8_free)
    base = c.expansion()
    comps = [_cmp("k5", pr["k5"], oracle[5]), _cmp("k6", pr["k6"], oracle[6])]
    # gamma before k7, k8 act, and at the final values
    upto6 = oracle.replace({7: 0, 8: 0, 9: 0})
    g0 = transformed_expansion(base, upto6, 8, method)["T2^2*T3"]
    comps.append(_cmp("gamma(k7=k8=0)", pr["gamma_reduced_of"](0, 0), g0))
    comps.append(_cmp("gamma_general(k7=k8=0)", pr["gamma_general_of"](upto6), g0,
                      "general expression, '5 c4 k^2' read as 5 c4 k2"))
    comps.append(_cmp("k7", pr["k7_of"](oracle[8]), oracle[7]))
    extras = {}
    notes = []
    # xi and eta at k9 = 0 then the final choices
    pre9 = transformed_expansion(base, oracle.replace({9: 0}), 8, method)
    comps.append(_cmp("xi(k9=0)", pr["xi_of"](oracle[8], 0), pre9["T2^4"]))
    eta_true = pre9["T2*T3^2"]
    comps.append(_cmp("eta (printed 971 denominator)", pr["eta_971_of"](oracle[8]), eta_true))
    comps.append(_cmp("eta (972 denominator)", pr["eta_972_of"](oracle[8]), eta_true))
    if mode == "full":
        comps.append(_cmp("k8", pr["k8_full"], oracle[8]))
        comps.append(_cmp("k9", pr["k9_full"], oracle[9]))
        form, pinned = "LANDRED8A", {"T2": c.c1, "T2^4": Fraction(1)}
    else:
        comps.append(_cmp("k9 (xi only)", pr["k9_xi"], oracle[9]))
        comps.append(_cmp("eta (xi only)", pr["eta_xi_of"](k8_free), eta_true))
        extras["eta"] = eta_true
        form, pinned = "LANDRED8B", {"T2": c.c1, "T2^4": Fraction(1)}
    extras["xi_before_k9"] = pre9["T2^4"]
    extras["eta_before_k9"] = eta_true
    return ClosedFormResult(oracle, extras, comps, form, pinned, notes)


# -- transition region, order six -------------------------------------------------

_CASE_TARGETS6 = {"a": (0, 1), "b": (1, 0), "c": (1, 1)}
_CASE_FORM6 = {"a": "RP6A", "b": "RP6B", "c": "RP6BOTH"}


def _require_singular(c: LdGCoefficients):
    if c.c2 == 0:
        raise RegimeError("c2 = 0: the transition-region reduction needs c2 != 0")


def _small_root(a2, a1, a0):
    """Root of ``a2 k^2 + a1 k + a0`` with a finite limit as ``a2 -> 0``."""
    if a2 == 0:
        if a1 == 0:
            raise UnreachableTarget("degenerate quadratic")
        return -a0 / a1
    disc = a1 * a1 - 4 * a2 * a0
    if isinstance(disc, QuadraticSurd) or disc < 0:
        if not isinstance(disc, QuadraticSurd):
            raise UnreachableTarget("no real root (negative discriminant)")
        raise TypeError("nested surd")
    r = QuadraticSurd.sqrt(disc)
    s = 1 if a1 >= 0 else -1
    return (2 * a0) / (-a1 - s * r)


def _series_mul(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, ai in enumerate(a[: n + 1]):
        if ai:
            for j, bj in enumerate(b[: n + 1 - i]):
                out[i + j] += ai * bj
    return out


def _series_inv(a, n):
    if not a[0]:
        raise ZeroDivisionError("series with zero constant term")
    out = [Fraction(0)] * (n + 1)
    out[0] = 1 / a[0]
    for m in range(1, n + 1):
        s = sum(a[j] * out[m - j] for j in range(1, min(m, len(a) - 1) + 1))
        out[m] = -s / a[0]
    return out


def singular6_series(c: LdGCoefficients, case: str, n: int = SERIES_ORDER) -> dict:
    """Power series in ``c1`` of ``k2`` and ``k4`` (other coefficients held fixed).

    Solves ``9 c1^2 k^2 - B k - C = 0`` by the fixed point ``k = -C / (B - 9 c1^2 k)``
    in truncated exact series arithmetic.  Returns coefficient lists.
    """
    _, c2, c3, c4, c5, c6, *_ = _cs(c)
    t5, t6 = _CASE_TARGETS6[case]
    k3 = (t6 - c6) / (3 * c2)
    B = [6 * c2**2, -36 * c3]
    C = [2 * c2 * c4, 4 * c2 * k3 + 9 * (t5 - c5)]
    k = [Fraction(0)] * (n + 1)
    for _ in range(n + 2):
        # B - 9 c1^2 k
        den = [Fraction(0)] * (n + 1)
        den[0], den[1] = B[0], B[1]
        for i in range(n - 1):
            den[i + 2] -= 9 * k[i]
        k = [-v for v in _series_mul(C + [Fraction(0)] * (n - 1), _series_inv(den, n), n)]
    # k4 = (t5 - c5 - c1 k2^2 - 4 c3 k2) / (2 c2)
    k2sq = _series_mul(k, k, n)
    k4 = [Fraction(0)] * (n + 1)
    for i in range(n + 1):
        v = -4 * c3 * k[i] - (k2sq[i - 1] if i >= 1 else 0)
        if i == 0:
            v += t5 - c5
        k4[i] = v / (2 * c2)
    return {"k2": k, "k4": k4, "k3": k3}


def _eval_series(coeffs, x):
    acc = Fraction(0)
    for v in reversed(coeffs):
        acc = acc * x + v
    return acc


def printed_singular6(c: LdGCoefficients, case: str) -> dict:
    """Printed first-order series for ``k2``/``k4`` and exact ``k3``."""
    c1, c2, c3, c4, c5, c6, *_ = _cs(c)
    const = {"a": Fraction(-2, 9), "b": Fraction(-3, 2), "c": Fraction(-31, 18)}[case]
    k2 = [-c4 / (3 * c2),
          -2 * c3 * c4 / c2**3 + 3 * c5 / (2 * c2**2) + 2 * c6 / (9 * c2**2) + const / c2**2]
    out = {"k2_series": k2,
           "k3": (1 - c6) / (3 * c2) if case in ("a", "c") else -c6 / (3 * c2)}
    if case == "a":
        out["k4_series"] = [2 * c3 * c4 / (3 * c2**2) - c5 / (2 * c2),
                            4 * c4 * c3**2 / c2**4 - 3 * c5 * c3 / c2**3 - 4 * c6 * c3 / (9 * c2**3)
                            + 4 * c3 / (9 * c2**3) - c4**2 / (18 * c2**3)]
    if case == "c":
        out["k4_series"] = [2 * c3 * c4 / (3 * c2**2) - c5 / (2 * c2) + 1 / (2 * c2),
                            4 * c4 * c3**2 / c2**4 - 3 * c5 * c3 / c2**3 - 4 * c6 * c3 / (9 * c2**3)
                            + 31 * c3 / (9 * c2**3) - c4**2 / (18 * c2**3)]
    return out


def printed_singular6_exact(c: LdGCoefficients, case: str):
    """Printed square-root forms of ``k2`` (and ``k4`` in case c), as sympy numbers.

    Only defined for ``c1 != 0``.  Evaluated with sympy so that the printed
    ``1/c1^2`` and ``1/c1^3`` forms can be compared exactly.
    """
    import sympy as sp
    c1, c2, c3, c4, c5, c6 = (sp.Rational(v.numerator, v.denominator) for v in _cs(c)[:6])
    const = {"a": 4, "b": 27, "c": 31}[case]
    rad = (108 * c1 * c3 - 18 * c2**2)**2 - 108 * c1**2 * (27 * c5 * c1 + 4 * c6 * c1
                                                           - const * c1 - 6 * c2 * c4)
    k2 = (18 * c2**2 - 108 * c1 * c3 - sp.sqrt(rad)) / (54 * c1**2)
    out = {"k2": k2}
    if case == "c":
        inner = (3 * c2**4 - 36 * c1 * c3 * c2**2 + 6 * c1**2 * (18 * c3**2 + c2 * c4)
                 + c1**3 * (-27 * c5 - 4 * c6 + 31))
        out["k4"] = (-3 * c2**4 + 18 * c1 * c3 * c2**2 + sp.sqrt(3) * sp.sqrt(inner) * c2**2
                     - 3 * c1**2 * c4 * c2 + 2 * c1**3 * (c6 - 1)) / (27 * c1**3 * c2)
    return out


def _rel_close(a, b, tol) -> bool:
    a, b = float(a), float(b)
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) <= tol * scale


def singular_coefficients_order6(c: LdGCoefficients, case: str = "a",
                                 method: str = "diagonal") -> ClosedFormResult:
    """Transition-region order-6 reduction with ``k1 = k5 = k6 = 0``.

    ``k2`` is the root of a quadratic with a finite ``c1 -> 0`` limit, computed
    exactly in ``Q(sqrt(D))`` through the rationalized form, which never
    divides by ``c1``.  ``k4`` then follows from the ``T2^3`` condition.
    """
    _require_singular(c)
    if not c.is_order6:
        raise ValueError("order-6 reduction requires c7 = c8 = c9 = 0")
    if case not in _CASE_TARGETS6:
        raise ValueError("order-6 singular case is 'a', 'b' or 'c'")
    c1, c2, c3, c4, c5, c6, *_ = _cs(c)
    t5, t6 = _CASE_TARGETS6[case]
    notes = []
    comps = []
    k3 = (t6 - c6) / (3 * c2)
    # quadratic A k^2 - B k - C = 0 from the T2*T3 condition after eliminating k4
    A = 9 * c1**2
    B = 6 * c2**2 - 36 * c1 * c3
    C = 2 * c2 * c4 + 4 * c1 * c2 * k3 + 9 * c1 * (t5 - c5)
    try:
        k2 = _small_root(A, -B, -C)
    except UnreachableTarget as exc:
        raise RegimeError(f"transition-region case {case}: {exc}") from exc
    k4 = (t5 - c5 - c1 * k2 * k2 - 4 * c3 * k2) / (2 * c2)
    ks = TransformCoefficients().replace({2: k2, 3: k3, 4: k4})

    # independent check: k's found by sampling the substitution map
    oracle = _oracle_singular6(c, case, method)
    for i in (2, 3, 4):
        comps.append(Comparison(f"k{i} (oracle)", ks[i], oracle[i], ks[i] == oracle[i]))

    pr = printed_singular6(c, case)
    comps.append(_cmp("k3", pr["k3"], k3))
    ratio = abs(c1 / c2**2)
    ser = singular6_series(c, case)
    comps.append(_cmp("k2 series order 0", pr["k2_series"][0], ser["k2"][0]))
    comps.append(_cmp("k2 series order 1", pr["k2_series"][1], ser["k2"][1]))
    if "k4_series" in pr:
        comps.append(_cmp("k4 series order 0", pr["k4_series"][0], ser["k4"][0]))
        comps.append(_cmp("k4 series order 1", pr["k4_series"][1], ser["k4"][1]))
    if c1 != 0:
        ex = printed_singular6_exact(c, case)
        comps.append(Comparison("k2 (printed root form)", _sympy_float(ex["k2"]), float(k2),
                                _sympy_close(ex["k2"], k2), "numeric-50-digit"))
        if "k4" in ex:
            comps.append(Comparison("k4 (printed root form)", _sympy_float(ex["k4"]), float(k4),
                                    _sympy_close(ex["k4"], k4), "numeric-50-digit"))
    if ratio < SERIES_BAND_TOP:
        # series evaluated at c1 against the exact root
        sk2 = _eval_series(ser["k2"], c1)
        sk4 = _eval_series(ser["k4"], c1)
        comps.append(Comparison("k2 series vs exact", sk2, k2, _rel_close(sk2, k2, 1e-6),
                                "relative-1e-6"))
        comps.append(Comparison("k4 series vs exact", sk4, k4, _rel_close(sk4, k4, 1e-6),
                                "relative-1e-6"))
        first = _eval_series(pr["k2_series"], c1)
        # the truncation error is about the order-2 term
        bound = 4 * abs(float(ser["k2"][2] * c1**2)) + 1e-15 * abs(float(k2))
        comps.append(Comparison("k2 printed first-order series vs exact", first, k2,
                                abs(float(first - k2)) <= bound, "absolute-O(c1^2)"))
        if ratio < SERIES_THRESHOLD:
            notes.append("below the series switchover; the exact root is used and the "
                         "series agrees with it")
    gamma3 = c3 + 2 * c1 * k2
    pinned = {"T2": c1, "T3": c2, "T2^2": gamma3}
    if t5:
        pinned["T2^3"] = Fraction(1)
    if t6:
        pinned["T3^2"] = Fraction(1)
    extras = {"gamma2": c2, "gamma3": gamma3}
    return ClosedFormResult(ks, extras, comps, _CASE_FORM6[case], pinned, notes)


def _sympy_float(expr) -> float:
    return float(expr.evalf(50))


def _sympy_close(expr, value, digits: int = 50) -> bool:
    import sympy as sp
    if isinstance(value, QuadraticSurd):
        v = sp.Rational(value.a.numerator, value.a.denominator) + \
            sp.Rational(value.b.numerator, value.b.denominator) * \
            sp.sqrt(sp.Rational(value.d.numerator, value.d.denominator))
    else:
        v = sp.Rational(value.numerator, value.denominator)
    a = sp.N(expr, digits)
    b = sp.N(v, digits)
    scale = max(abs(a), abs(b), sp.Float(1e-300))
    return bool(abs(a - b) <= scale * sp.Float(10) ** (-(digits - 10)))


def _oracle_singular6(c: LdGCoefficients, case: str, method: str) -> TransformCoefficients:
    """Solve the order-6 transition-region conditions from substitution samples alone.

    ``T3^2`` fixes ``k3``.  The ``T2^3`` coefficient is quadratic in ``k2`` and
    affine in ``k4`` while ``T2*T3`` is affine in both; both maps are
    recovered by sampling, ``k4`` is eliminated and the remaining quadratic in
    ``k2`` is solved for its small root.
    """
    t5, t6 = _CASE_TARGETS6[case]
    base = c.expansion()
    F = Fraction

    def at(k2=F(0), k3=F(0), k4=F(0)):
        ks = TransformCoefficients().replace({2: k2, 3: k3, 4: k4})
        e = transformed_expansion(base, ks, 6, method)
        return e["T2*T3"], e["T2^3"], e["T3^2"]

    g6_0 = at()[2]
    g6_1 = at(k3=F(1))[2]
    slope6 = g6_1 - g6_0
    if not slope6:
        raise UnreachableTarget("T3^2 target unreachable")
    k3 = (t6 - g6_0) / slope6
    if at(k3=F(2))[2] != g6_0 + 2 * slope6:
        raise RuntimeError("T3^2 coefficient not affine in k3")

    s = [at(F(v), k3) for v in (0, 1, 2, 3)]
    g4 = [v[0] for v in s]
    g5 = [v[1] for v in s]
    # g5(k2, 0) = q0 + q1 k2 + q2 k2^2
    q0 = g5[0]
    q2 = (g5[2] - 2 * g5[1] + g5[0]) / 2
    q1 = g5[1] - q0 - q2
    if g5[3] != q0 + 3 * q1 + 9 * q2:
        raise RuntimeError("T2^3 coefficient not quadratic in k2")
    a0 = g4[0]
    a1 = g4[1] - g4[0]
    if g4[2] != a0 + 2 * a1:
        raise RuntimeError("T2*T3 coefficient not affine in k2")
    w = at(F(0), k3, F(1))
    a2 = w[0] - a0
    sl = w[1] - q0
    if not sl:
        raise UnreachableTarget("T2^3 target unreachable through k4")
    # k4 = (t5 - q(k2)) / sl; plug into a0 + a1 k2 + a2 k4 = 0
    A2 = -a2 * q2 / sl
    A1 = a1 - a2 * q1 / sl
    A0 = a0 + a2 * (t5 - q0) / sl
    k2 = _small_root(A2, A1, A0)
    k4 = (t5 - q0 - q1 * k2 - q2 * k2 * k2) / sl
    return TransformCoefficients().replace({2: k2, 3: k3, 4: k4})


# -- transition region, order eight ------------------------------------------------

def printed_singular8(c: LdGCoefficients, case: str) -> dict:
    """Printed expressions; ``*_series`` entries are ``[order 0, order 1]`` in c1."""
    c1, c2, c3, c4, c5, c6, c7, c8, c9 = _cs(c)
    if case == "a":
        return {
            "k2": (2 * c1 * c6 - 3 * c2 * c4) / (9 * c2**2),
            "k3": -c6 / (3 * c2),
            "k4": Fraction(0),
            "k6": Fraction(0),
            "k7": -((c8 - 1) * c2**2 - 3 * c4 * c6 * c2 + c1 * c6**2) / (3 * c2**3),
            "k5_series": [(4 * c4**2 + 4 * c3 * c6 - 3 * c2 * c7) / (9 * c2**2),
                          (3 * (4 * c8 + 27 * c9 - 4) * c2**2
                           - 2 * (81 * c4 * c5 + 26 * c4 * c6 + 54 * c3 * c7) * c2
                           + 18 * c3 * (11 * c4**2 + 8 * c3 * c6)) / (54 * c2**4)],
            "k8_series": [-(9 * c9 * c2**2 - 18 * c4 * c5 * c2 - 12 * c3 * c7 * c2
                            + 22 * c3 * c4**2 + 16 * c3**2 * c6) / (18 * c2**3),
                          (-3 * (6 * c5 * c6 + c4 * c7 + c3 * (4 * c8 + 27 * c9 - 4)) * c2**2
                           + 2 * (2 * c4**3 + c3 * (81 * c5 + 34 * c6) * c4 + 54 * c3**2 * c7) * c2
                           - 18 * c3**2 * (11 * c4**2 + 8 * c3 * c6)) / (27 * c2**5)],
            "gamma3": c3 - (2 * c4 / (3 * c2)) * c1 + (4 * c6 / (9 * c2**2)) * c1**2,
            "gamma5_series": [c5 - 4 * c3 * c4 / (3 * c2),
                              -(c4**2 / c2**2 + 16 * c3 * c6 / (9 * c2**2) - 2 * c7 / (3 * c2))],
        }
    if case == "b":
        num3 = 9 * c5 * c2**2 - 12 * c3 * c4 * c2 + c1 * c4**2
        den6 = 12 * c2 * (c2**3 - 6 * c1 * c3 * c2 + c1**2 * c4)
        out = {
            "k2": -c4 / (3 * c2),
            "k3": num3 / (4 * c2**3),
            "k4": -num3 / (18 * c2**3),
            "k5": Fraction(0),
            "k7_series": [(c2 * (-9 * c4 * c5 + 8 * c4 * c6 - 4 * c2 * c8)
                           - 36 * c3 * (c4**2 - c2 * c7)) / (12 * c2**3),
                          (-3 * (-27 * c5**2 + 8 * c4 * c7 + 8 * c3 * (4 * c8 + 27 * c9 - 27)) * c2**2
                           + 4 * (7 * c4**3 + 6 * c3 * (45 * c5 + 8 * c6) * c4 + 216 * c3**2 * c7) * c2
                           - 1440 * c3**2 * c4**2) / (48 * c2**5)],
            "k8_series": [(-9 * (c9 - 1) * c2**2 + 21 * c4 * c5 * c2 - 10 * c3 * c4**2)
                          / (18 * c2**3),
                          (-144 * c3**2 * c4**2 + 216 * c2 * c3 * c5 * c4
                           + c2 * (4 * c4**3 - 81 * c2 * c5**2)) / (216 * c2**5)],
            "gamma3": c3 - (2 * c4 / (3 * c2)) * c1,
            "gamma6_series": [c6 - 9 * c3 * c4 / c2 + Fraction(27, 4) * c5,
                              -(Fraction(27, 4) * c4**2 / c2**2 - Fraction(9, 2) * c7 / c2)],
        }
        if den6:
            out["k6"] = (-6 * c7 * c2**3 + 8 * c4**2 * c2**2
                         + c1 * ((4 * c8 + 27 * c9 - 27) * c2**2 - 2 * c4 * (27 * c5 + 4 * c6) * c2
                                 + 18 * c3 * c4**2)) / den6
        return out
    raise ValueError("order-8 singular case is 'a' or 'b'")


# printed gamma series are in lambda = -c1; convert to powers of c1
def _lambda_to_c1(series):
    return [series[0], -series[1]]


def singular_coefficients_order8(c: LdGCoefficients, case: str = "a",
                                 method: str = "diagonal",
                                 check_first_order: bool = True) -> ClosedFormResult:
    """Transition-region order-8 reduction to the RP8A / RP8B forms.

    The k's come from the substitution oracle (no division by ``c1``).  The
    printed exact entries are compared exactly; printed series entries are
    compared exactly at order zero, and their order-one coefficients are
    compared against a difference quotient at a tiny ``c1``.
    """
    _require_singular(c)
    if case not in ("a", "b"):
        raise ValueError("order-8 singular case is 'a' or 'b'")
    frozen = {1: 0, 9: 0, 10: 0, 11: 0}
    frozen.update({4: 0, 6: 0} if case == "a" else {5: 0})
    try:
        ks = oracle_solve(c, 8, singular8_plan(case), frozen, method)
    except UnreachableTarget as exc:
        raise RegimeError(f"transition-region order-8 case {case}: {exc}") from exc
    pr = printed_singular8(c, case)
    comps = []
    exact_keys = ("k2", "k3", "k4", "k6", "k7") if case == "a" else ("k2", "k3", "k4", "k5", "k6")
    for key in exact_keys:
        if key in pr:
            comps.append(_cmp(key, pr[key], ks[int(key[1:])]))
    out = transformed_expansion(c.expansion(), ks, 8, method)
    gamma3 = out["T2^2"]
    comps.append(_cmp("gamma3", pr["gamma3"], gamma3))
    series_keys = ("k5", "k8") if case == "a" else ("k7", "k8")
    surv_name, surv_key = ("T2^3", "gamma5") if case == "a" else ("T3^2", "gamma6")

    def values_at(c1v):
        cc = c.replace(c1=c1v)
        kk = oracle_solve(cc, 8, singular8_plan(case), frozen, method)
        ee = transformed_expansion(cc.expansion(), kk, 8, method)
        return kk, ee

    if c.c1 == 0:
        k0, e0 = ks, out
    else:
        k0, e0 = values_at(Fraction(0))
    for key in series_keys:
        comps.append(_cmp(f"{key} order 0", pr[f"{key}_series"][0], k0[int(key[1:])]))
    gser = _lambda_to_c1(pr[f"{surv_key}_series"])
    comps.append(_cmp(f"{surv_key} order 0", gser[0], e0[surv_name]))
    if check_first_order:
        h = Fraction(1, 10**30)
        kh, eh = values_at(h)
        for key in series_keys:
            i = int(key[1:])
            dq = (kh[i] - k0[i]) / h
            ok = _rel_close(dq, pr[f"{key}_series"][1], 1e-20) or dq == pr[f"{key}_series"][1]
            comps.append(Comparison(f"{key} order 1", pr[f"{key}_series"][1], dq, ok,
                                    "difference-quotient-1e-30"))
        dq = (eh[surv_name] - e0[surv_name]) / h
        ok = _rel_close(dq, gser[1], 1e-20) or dq == gser[1]
        comps.append(Comparison(f"{surv_key} order 1", gser[1], dq, ok,
                                "difference-quotient-1e-30"))
    if case == "a":
        form, pinned = "RP8A", {"T2": c.c1, "T3": c.c2, "T2^2": pr["gamma3"],
                                "T2*T3^2": Fraction(1)}
        extras = {"gamma2": out["T3"], "gamma3": gamma3, "gamma5": out["T2^3"]}
    else:
        form, pinned = "RP8B", {"T2": c.c1, "T3": c.c2, "T2^2": pr["gamma3"],
                                "T2^4": Fraction(1)}
        extras = {"gamma2": out["T3"], "gamma3": gamma3, "gamma6": out["T3^2"]}
    return ClosedFormResult(ks, extras, comps, form, pinned)


# -- driver ---------------------------------------------------------------------

def resolve_regime(c: LdGCoefficients, regime: str) -> str:
    """``auto`` picks regular when ``|c1| >= 1e-3 * max(1, c2^2)``."""
    if regime in ("regular", "singular"):
        return regime
    if regime != "auto":
        raise ValueError("regime is 'regular', 'singular' or 'auto'")
    return "regular" if abs(c.c1) >= Fraction(1, 1000) * max(1, c.c2**2) else "singular"


def reduce(c: LdGCoefficients, order: int = 6, regime: str = "regular", mode: str = "full",
           case: str = "a", k4=Fraction(0), k8=Fraction(0),
           method: str = "diagonal") -> ReductionReport:
    """Compute a reduction, verify it by substitution and return the full report."""
    regime = resolve_regime(c, regime)
    if order not in (6, 8):
        raise ValueError("order is 6 or 8")
    if order == 6 and not c.is_order6:
        raise ValueError("order 6 requires c7 = c8 = c9 = 0")
    if regime == "regular":
        if order == 6:
            res = regular_coefficients_order6(c, k4, method)
        else:
            res = regular_coefficients_order8(c, k4, mode, k8, method)
    else:
        if order == 6:
            res = singular_coefficients_order6(c, case, method)
        else:
            res = singular_coefficients_order8(c, case, method)
    report = apply_transform(c, res.ks, order, res.form, res.pinned, method, regime)
    report.extras.update(res.extras)
    report.comparisons.extend(res.comparisons)
    report.notes.extend(res.notes)
    mism = [cmp.quantity for cmp in res.comparisons if not cmp.match]
    if mism:
        report.notes.append("printed formula differs from substitution for: " + ", ".join(mism))
    return report

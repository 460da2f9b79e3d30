"""Critical points and stability of the reduced potentials.

Covers the order-8 reduced potential ``-lam T2 + eta T2 T3^2 + T2^4``
(collinearity branches, amplitudes, Hessian spectra), the effective
one-dimensional potential at the main transition (power-series branch and
Hessian expansion), and a numeric minimizer that labels phases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .landau import ATTAINABLE, InvariantExpansion, MAX_DEGREE, convexity_check, decompose_invariant, expand
from .poly5 import CompiledPoly, Poly5, evaluate, gradient, hessian
from .so3rep import invariants, orbit_geometry
from .surd import QuadraticSurd

GRAD_TOL = 1e-10
SPECTRUM_TOL = 1e-8
DEDUP_TOL = 1e-8
OMEGA_BRANCH = 1 - QuadraticSurd(0, Fraction(2, 3), 2)  # 1 - 2 sqrt(2)/3


def reduced8_expansion(lam, eta) -> InvariantExpansion:
    """``-lam T2 + eta T2 T3^2 + T2^4``."""
    return InvariantExpansion.from_names({"T2": -_num(lam), "T2*T3^2": _num(eta),
                                          "T2^4": Fraction(1)})


def reduced6_expansion(c1) -> InvariantExpansion:
    """``c1 T2 + T2^3``."""
    return InvariantExpansion.from_names({"T2": _num(c1), "T2^3": Fraction(1)})


def _num(v):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, float) and v.is_integer():
        return Fraction(int(v))
    if isinstance(v, float):
        return Fraction(v)  # binary value, exact
    return Fraction(v)


def reduced_critical_radius(c1, order: int):
    """``T2`` on the critical shell of ``c1 T2 + T2^3`` or ``c1 T2 + T2^4``; ``None`` if ``c1 >= 0``."""
    c1 = float(c1)
    if order not in (6, 8):
        raise ValueError("order is 6 or 8")
    if c1 >= 0:
        return None
    return math.sqrt(-c1 / 3) if order == 6 else (-c1 / 4) ** (1.0 / 3.0)


# -- gradient structure ------------------------------------------------------

@dataclass(frozen=True)
class GradientDecomposition:
    A: object
    B: object
    residual: float  # relative size of grad Phi - (A grad T2 + B grad T3)


def _t_gradients():
    t2, t3 = invariants()
    return gradient(t2), gradient(t3)


def _norm(v) -> float:
    return math.sqrt(sum(float(a) ** 2 for a in v))


def gradient_decomposition(x: Sequence, lam, eta) -> GradientDecomposition:
    """Coefficients ``A = -lam + 4 T2^3 + eta T3^2`` and ``B = 2 eta T2 T3``."""
    if all(v == 0 for v in x):
        raise ValueError("x must be nonzero")
    t2p, t3p = invariants()
    t2, t3 = evaluate(t2p, x), evaluate(t3p, x)
    A = -lam + 4 * t2**3 + eta * t3**2
    B = 2 * eta * t2 * t3
    g2, g3 = _t_gradients()
    direct = [evaluate(g, x) for g in gradient(expand(reduced8_expansion(lam, eta)))]
    combo = [A * evaluate(a, x) + B * evaluate(b, x) for a, b in zip(g2, g3)]
    diff = _norm([a - b for a, b in zip(direct, combo)])
    scale = max(_norm(direct), _norm(combo), 1e-300)
    return GradientDecomposition(A, B, diff / scale)


@dataclass(frozen=True)
class NoncollinearReport:
    determined: bool
    t3: object
    t2: float | None
    admissible: bool
    message: str


def noncollinear_solutions(lam, eta) -> NoncollinearReport:
    """The ``T3 = 0`` family required when the invariant gradients are independent."""
    lam = float(lam)
    if eta == 0:
        return NoncollinearReport(False, None, None, False,
                                  "eta = 0: T3 undetermined, and T2^3 = lam/4")
    t2 = -(np.cbrt(lam / 4.0))
    ok = t2 > 0
    msg = "T3 = 0 with T2 = -(lam/4)^(1/3)" + ("" if ok else "; T2 < 0 is not attainable")
    return NoncollinearReport(True, 0, float(t2), bool(ok), msg)


def collinearity_mu(x: Sequence, tol: float = 1e-10) -> list:
    """Labels and values of the candidates ``mu`` with ``grad T3 = mu grad T2`` at ``x``."""
    x1, x2, x3, x4, x5 = (float(v) for v in x)
    theta = math.sqrt((x1 - x4) ** 2 + 4 * x2 ** 2)
    cands = [("a", -x1), ("b", -x4), ("c", -(x1 + x4 + theta) / 2), ("d", -(x1 + x4 - theta) / 2)]
    g2, g3 = _t_gradients()
    xv = [float(v) for v in x]
    v2 = np.array([evaluate(g, xv) for g in g2], dtype=float)
    v3 = np.array([evaluate(g, xv) for g in g3], dtype=float)
    scale = max(np.linalg.norm(v3), np.linalg.norm(v2), 1e-300)
    out = []
    for lbl, mu in cands:
        if np.linalg.norm(v3 - mu * v2) <= tol * scale * max(1.0, abs(mu)):
            out.append((lbl, mu))
    return out


# -- branches ------------------------------------------------------------------

@dataclass
class BranchSolution:
    case: str
    point: tuple
    free: dict
    t2: object
    t3: object
    omega_paper: object
    omega_trace: float
    representatives: list = field(default_factory=list)
    admissible: bool = True


def _sqrt(v):
    """Exact root for rational arguments, float root otherwise."""
    if isinstance(v, (int, Fraction)):
        v = Fraction(v)
        if v < 0:
            raise ValueError("negative radicand")
        return QuadraticSurd.sqrt(v)
    if v < 0:
        if v > -1e-12:
            return 0.0
        raise ValueError("negative radicand")
    return math.sqrt(v)


def omega_paper_exact(t2, t3):
    """``1 - sqrt(6 t3^2 / t2^3)`` in exact arithmetic when the ratio is rational."""
    r = 6 * t3 * t3 / (t2 * t2 * t2)
    if isinstance(r, Fraction):
        return 1 - QuadraticSurd.sqrt(r)
    return 1.0 - math.sqrt(float(r))


def _finish(case, pt, free, reps, admissible=True) -> BranchSolution:
    t2p, t3p = invariants()
    t2, t3 = evaluate(t2p, pt), evaluate(t3p, pt)
    wp = omega_paper_exact(t2, t3)
    geo = orbit_geometry([float(v) for v in pt])
    return BranchSolution(case, tuple(pt), free, t2, t3, wp, geo.omega_trace, reps, admissible)


def branch_points(case: str, x1=Fraction(1), x2=None, x4=None, sign: int = 1) -> BranchSolution:
    """Point of collinearity branch ``case`` with the given free coordinates.

    ``sign`` selects the ``+/-`` root.  Defaults reproduce the one-dimensional
    representatives: ``x4 = 0`` for (a), ``x4 = x1`` for (b), ``x4 = x2 = x1``
    for (c) and ``x4 = x1, x2 = -x1`` for (d).
    """
    s = 1 if sign >= 0 else -1
    if case == "a":
        x4 = Fraction(0) if x4 is None else x4
        rad = 2 * x1 * x1 - x1 * x4 - x4 * x4
        if rad < 0:
            raise ValueError("case (a) needs (x1 - x4)(2 x1 + x4) >= 0")
        pt = (x1, 0, 0, x4, s * _sqrt(rad))
        reps = [(x1, 0, 0, 0, s * _sqrt(2 * x1 * x1)), (x1, 0, 0, x1, 0)]
        return _finish(case, pt, {"x1": x1, "x4": x4}, reps)
    if case == "b":
        x4 = x1 if x4 is None else x4
        rad = 2 * x4 * x4 - x1 * x4 - x1 * x1
        if rad < 0:
            raise ValueError("case (b) needs (x4 - x1)(2 x4 + x1) >= 0")
        pt = (x1, 0, s * _sqrt(rad), x4, 0)
        return _finish(case, pt, {"x1": x1, "x4": x4}, [(x1, 0, 0, x1, 0)])
    if case in ("c", "d"):
        x4 = x1 if x4 is None else x4
        if x2 is None:
            x2 = x1 if case == "c" else -x1
        if x2 == 0:
            raise ValueError("cases (c)/(d) need x2 != 0")
        if x4 == x1:
            # theta = 2 x2 on this slice
            rad = x2 * (3 * x1 + x2) if case == "c" else x2 * (x2 - 3 * x1)
            if rad < 0:
                raise ValueError(f"case ({case}) slice x4 = x1 needs a non-negative radicand")
            x3 = s * _sqrt(rad)
            pt = (x1, x2, x3, x4, -x3 if case == "c" else x3)
        else:
            pt = _general_cd(case, float(x1), float(x2), float(x4), s)
        reps = [(x1, x1, 2 * x1, x1, -2 * x1)] if case == "c" else [(x1, -x1, 2 * x1, x1, 2 * x1)]
        return _finish(case, pt, {"x1": x1, "x2": x2, "x4": x4}, reps)
    raise ValueError("case is one of a, b, c, d")


def _general_cd(case, x1, x2, x4, s):
    """Three-dimensional branches (c)/(d) in float arithmetic."""
    th = math.sqrt((x1 - x4) ** 2 + 4 * x2 ** 2)
    e = 1 if case == "c" else -1
    r3 = 2 * x2 ** 2 + 2 * x4 * (x4 + e * th) - x1 * (x1 + x4 - e * th)
    r5 = 4 * (x2 ** 2 + x4 * (x4 + e * th)) + 2 * x1 * (e * th - x4 - x1)
    if r3 < -1e-12 or r5 < -1e-12:
        raise ValueError(f"case ({case}) radicands are negative at these coordinates")
    x3 = s * math.sqrt(max(r3, 0.0)) / math.sqrt(2)
    x5 = s * (-e * th - x1 + x4) / (4 * x2) * math.sqrt(max(r5, 0.0))
    return (x1, x2, x3, x4, x5)


# -- amplitudes and spectra ---------------------------------------------------------

def _rational_root(q: Fraction, n: int):
    """Exact positive ``n``-th root of a non-negative rational, or ``None``."""
    if q < 0:
        return None

    def iroot(v):
        r = round(v ** (1.0 / n)) if v < 2**52 else int(v ** (1.0 / n))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**n == v:
                return cand
        return None
    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


@dataclass(frozen=True)
class BranchAmplitude:
    exists: bool
    x1: object | None
    radicand: object | None
    gradient_residual: float | None
    message: str = ""


def branch_radicand(lam, eta):
    """``lam / (4 (27 + 4 eta))``."""
    if 27 + 4 * eta == 0:
        raise ValueError("27 + 4 eta = 0")
    return lam / (4 * (27 + 4 * eta))


def existence_condition(lam, eta) -> bool:
    """``{lam >= 0, eta > -27/4}`` or ``{lam <= 0, eta < -27/4}``."""
    return (lam >= 0 and 4 * eta > -27) or (lam <= 0 and 4 * eta < -27)


def representative(case: str, amplitude):
    """One-dimensional representative with ``T2 = 3 * amplitude^2``.

    For (a)/(b) the amplitude is ``x1`` of ``(x1, 0, 0, x1, 0)``; for (c)/(d)
    it is ``x1 + x2`` (resp. ``x1 - x2``) on ``x4 = x1``, ``x2 = +-x1``.
    """
    a = amplitude
    if case in ("a", "b"):
        return (a, 0, 0, a, 0)
    h = a / 2
    if case == "c":
        return (h, h, 2 * h, h, -2 * h)
    if case == "d":
        return (h, -h, 2 * h, h, 2 * h)
    raise ValueError("case is one of a, b, c, d")


def branch_critical_value(lam, eta, case: str = "a") -> BranchAmplitude:
    """Amplitude ``(lam / (4 (27 + 4 eta)))^(1/6)`` checked against the exact gradient."""
    rad = branch_radicand(lam, eta)
    if rad < 0:
        return BranchAmplitude(False, None, rad, None, "radicand < 0: no real branch")
    if not existence_condition(lam, eta):
        return BranchAmplitude(False, None, rad, None, "outside the existence region")
    if rad == 0:
        return BranchAmplitude(True, 0 if isinstance(rad, Fraction) else 0.0, rad, 0.0,
                               "lam = 0: branch collapses to the origin")
    x1 = _rational_root(rad, 6) if isinstance(rad, Fraction) else None
    if x1 is None:
        x1 = float(rad) ** (1.0 / 6.0)
    pt = representative(case, x1)
    res = _relative_gradient(reduced8_expansion(lam, eta), pt)
    return BranchAmplitude(True, x1, rad, res)


def _relative_gradient(e: InvariantExpansion, pt) -> float:
    """``|grad Phi| / sum_i |grad (term_i)|`` at ``pt``; 0 when exactly critical."""
    total = [0] * 5
    scale = 0.0
    for name, v in e.nonzero().items():
        term = expand(InvariantExpansion.from_names({name: v}))
        g = [evaluate(gi, pt) for gi in gradient(term)]
        scale += _norm(g)
        total = [a + b for a, b in zip(total, g)]
    if scale == 0:
        return 0.0
    return _norm(total) / scale


@dataclass
class HessianSpectrum:
    eigenvalues: list
    zero_count: int
    stable: bool
    closed_form: list | None = None
    max_deviation: float | None = None
    agrees: bool | None = None


def closed_form_spectrum(case: str, lam: float, eta: float) -> list:
    """Printed spectra: (a)/(b) ``{0, 0, 18 lam, s, s}``, (c)/(d) with the quadratic pair."""
    lam, eta = float(lam), float(eta)
    den = 27 + 4 * eta
    if case in ("a", "b"):
        s = -18 * eta * lam / den
        vals = [0.0, 0.0, 18 * lam, s, s]
    elif case in ("c", "d"):
        g = math.sqrt(236196 + 94068 * eta + 9377 * eta**2)
        vals = [0.0, 0.0, -12 * eta * lam / den,
                3 * (486 + 47 * eta - g) * lam / (8 * den),
                3 * (486 + 47 * eta + g) * lam / (8 * den)]
    else:
        raise ValueError("case is one of a, b, c, d")
    return sorted(vals)


def numeric_spectrum(e: InvariantExpansion, pt) -> np.ndarray:
    cp = CompiledPoly(expand(e))
    H = cp.hess([float(v) for v in pt])
    return np.sort(np.linalg.eigvalsh((H + H.T) / 2))


def branch_stability(case: str, lam, eta, tol: float = SPECTRUM_TOL) -> HessianSpectrum:
    """Hessian spectrum of the order-8 reduced potential at the branch representative.

    Stability is decided from the numeric eigenvalues; the printed closed
    form is reported next to them with the largest relative deviation.
    """
    amp = branch_critical_value(lam, eta, case)
    if not amp.exists:
        raise ValueError(f"no branch for lam={lam}, eta={eta}: {amp.message}")
    pt = representative(case, amp.x1)
    num = numeric_spectrum(reduced8_expansion(lam, eta), pt)
    scale = max(float(np.max(np.abs(num))), 1e-300)
    zero = int(np.sum(np.abs(num) <= tol * scale))
    nonzero = num[np.abs(num) > tol * scale]
    stable = bool(np.all(nonzero > 0))
    cf = closed_form_spectrum(case, lam, eta)
    dev = float(np.max(np.abs(np.array(cf) - num))) / scale
    return HessianSpectrum([float(v) for v in num], zero, stable, cf, dev, dev <= tol)


# -- transition-region series ---------------------------------------------------------

@dataclass
class SeriesSolution:
    z: list
    sextic: object
    gradient_residual_order: int  # lowest eps power with a nonzero residual
    expected: list | None = None
    expected_matches: list | None = None
    residual_series: object = None


def printed_transition_z(g2, g3) -> list:
    """The five printed branch coefficients."""
    return [-1 / g2, 6 * g3 / g2**3, -72 * g3**2 / g2**5,
            4 * (g2**2 + 270 * g3**3) / g2**7,
            -144 * g3 * (g2**2 + 126 * g3**3) / g2**9]


def _sym(v):
    import sympy as sp
    if v is None:
        return None
    if isinstance(v, Fraction):
        return sp.Rational(v.numerator, v.denominator)
    return sp.sympify(v)


def transition_branch_series(g2=None, g3=None, sextic=1, nterms: int = 5) -> SeriesSolution:
    """Branch ``x(eps) = sum z_k eps^k`` of ``Psi' = 0`` for ``Psi = -3 eps x^2 - 2 g2 x^3 + 9 g3 x^4 + s x^6``.

    ``g2``/``g3`` default to symbols.  By default ``s = 1``; the restriction of
    ``T2^3`` to the invariant line gives ``s = 27``.
    """
    import sympy as sp
    G2 = sp.Symbol("gamma2") if g2 is None else _sym(g2)
    G3 = sp.Symbol("gamma3") if g3 is None else _sym(g3)
    if G2 == 0:
        raise ValueError("gamma2 = 0: series undefined")
    S = _sym(sextic)
    eps, x = sp.symbols("epsilon x")
    psi = -3 * eps * x**2 - 2 * G2 * x**3 + 9 * G3 * x**4 + S * x**6
    dpsi = sp.diff(psi, x)
    zs = []
    zsyms = sp.symbols(f"z1:{nterms + 1}")
    for k in range(1, nterms + 1):
        xs = sum(z * eps**(i + 1) for i, z in enumerate(zs)) + zsyms[k - 1] * eps**k
        expr = sp.expand(dpsi.subs(x, xs))
        coeff = sp.expand(expr.coeff(eps, k + 1))
        sols = sp.solve(coeff, zsyms[k - 1])
        if k == 1:
            sols = [s for s in sols if s != 0]
        if len(sols) != 1:
            raise RuntimeError(f"order {k}: expected a unique solution, got {sols}")
        zs.append(sp.simplify(sols[0]))
    xs = sum(z * eps**(i + 1) for i, z in enumerate(zs))
    res = sp.expand(dpsi.subs(x, xs))
    order = None
    for p in range(0, sp.Poly(res, eps).degree() + 1):
        if sp.simplify(res.coeff(eps, p)) != 0:
            order = p
            break
    printed = [sp.simplify(v) for v in printed_transition_z(G2, G3)]
    matches = [bool(sp.simplify(a - b) == 0) for a, b in zip(zs, printed[:nterms])]
    return SeriesSolution(zs, S, order if order is not None else -1, printed[:nterms], matches, res)


@dataclass
class TransitionHessian:
    H1: object
    H2: object
    H1_printed: object
    H2_printed: object
    mu: list  # first two orders of the nonzero eigenvalues, computed
    mu_printed: list
    lambda_s: object
    matches: dict


def printed_H1():
    import sympy as sp
    return sp.Matrix([[0, 0, 0, 3, 0], [0, -6, 0, 0, 0], [0, 0, 0, 0, 0],
                      [3, 0, 0, 0, 0], [0, 0, 0, 0, 0]])


def printed_H2(g2, g3):
    import sympy as sp
    return 18 * g3 / g2**2 * sp.diag(1, 2, 0, 1, 0)


def transition_branch_hessian(g2=None, g3=None, sextic=1) -> TransitionHessian:
    """Hessian of ``-eps T2 + g2 T3 + g3 T2^2 + T2^3`` along the series branch, to ``O(eps^2)``.

    The nonzero eigenvalues to second order come from first-order
    perturbation of the simple eigenvalues of ``H1``.
    """
    import sympy as sp
    G2 = sp.Symbol("gamma2") if g2 is None else _sym(g2)
    G3 = sp.Symbol("gamma3") if g3 is None else _sym(g3)
    if G2 == 0:
        raise ValueError("gamma2 = 0: series undefined")
    eps = sp.Symbol("epsilon")
    ser = transition_branch_series(G2, G3, sextic, nterms=2)
    X = ser.z[0] * eps + ser.z[1] * eps**2
    xs = sp.symbols("x1:6")
    t2 = xs[0]**2 + xs[1]**2 + xs[2]**2 + xs[3]**2 + xs[4]**2 + xs[0] * xs[3]
    t3 = (xs[0] * (xs[1]**2 - xs[3]**2 - xs[4]**2) - xs[3] * (xs[0]**2 - xs[1]**2 + xs[2]**2)
          + 2 * xs[1] * xs[2] * xs[4])
    phi = -eps * t2 + G2 * t3 + G3 * t2**2 + t2**3
    H = sp.hessian(phi, xs).subs({xs[0]: X, xs[1]: 0, xs[2]: 0, xs[3]: X, xs[4]: 0})
    H = H.applyfunc(sp.expand)
    H1 = H.applyfunc(lambda v: sp.simplify(v.coeff(eps, 1)))
    H2 = H.applyfunc(lambda v: sp.simplify(v.coeff(eps, 2)))
    if any(sp.simplify(v.coeff(eps, 0)) != 0 for v in H):
        raise RuntimeError("Hessian does not vanish at eps = 0")
    mus = []
    for val, mult, vecs in H1.eigenvects():
        if val == 0:
            continue
        if mult != 1:
            raise RuntimeError("degenerate nonzero eigenvalue of H1")
        v = vecs[0]
        corr = sp.simplify((v.T * H2 * v)[0] / (v.T * v)[0])
        mus.append(sp.expand(val * eps + corr * eps**2))
    mus = sorted(mus, key=lambda m: float(sp.N(m.coeff(eps, 1))))
    a = 6 * G3 / G2**2
    printed_mu = [sp.expand(-6 * (1 - a * eps) * eps), sp.expand(-3 * (1 - a * eps) * eps),
                  sp.expand(3 * (1 + a * eps) * eps)]
    lam_s = None if (G3.is_number and G3 <= 0) else G2**2 / (6 * G3)
    matches = {
        "H1": sp.simplify(H1 - printed_H1()) == sp.zeros(5, 5),
        "H2": sp.simplify(H2 - printed_H2(G2, G3)) == sp.zeros(5, 5),
        "mu": all(sp.simplify(m - p) == 0 for m, p in zip(mus, printed_mu)),
    }
    return TransitionHessian(H1, H2, printed_H1(), printed_H2(G2, G3), mus, printed_mu,
                             lam_s, matches)


def mu_values(g2: float, g3: float, eps: float) -> tuple:
    """Printed eigenvalue branches at a numeric ``eps``."""
    a = 6 * g3 / g2**2
    return (-6 * (1 - a * eps) * eps, -3 * (1 - a * eps) * eps, 3 * (1 + a * eps) * eps)


def stability_threshold(g2, g3):
    """``lambda_s = g2^2 / (6 g3)`` for ``g3 > 0``; ``None`` otherwise."""
    if g3 <= 0:
        return None
    return g2 * g2 / (6 * g3)


# -- numeric minimization -----------------------------------------------------------------

@dataclass(frozen=True)
class MinimumRecord:
    point: tuple
    value: float
    t2: float
    t3: float
    omega_paper: float | None
    omega_trace: float | None
    label: str


class NonConvexError(ValueError):
    """The leading part of the potential is not positive; the potential is unbounded below."""


def _label(t2: float, geo) -> str:
    q = math.sqrt(max(t2, 0.0))
    if q < 1e-8:
        return "isotropic"
    if geo.omega_trace is not None and geo.omega_trace < 1e-6:
        return "uniaxial"
    return "biaxial"


def _start_radius(e: InvariantExpansion) -> float:
    """Scale of the coordinates at which the leading part dominates."""
    from .landau import basis_degree
    lead = e.leading()
    d = lead.degree()
    ell = max(abs(float(v)) for v in lead if v)
    r = 1.0
    for i, v in enumerate(e):
        di = basis_degree(i)
        if v and di < d:
            r = max(r, (abs(float(v)) / ell) ** (1.0 / (d - di)))
    return 1.5 * math.sqrt(r)


def _damped_newton(cp: CompiledPoly, x0: np.ndarray, max_iter: int = 300):
    x = x0.copy()
    f, g, H = cp.value_grad_hess(x)
    for _ in range(max_iter):
        gn = np.linalg.norm(g)
        if gn < 1e-12 * (1 + abs(f)):
            break
        w, V = np.linalg.eigh((H + H.T) / 2)
        floor = 1e-8 * max(1.0, float(np.max(np.abs(w))))
        w = np.maximum(np.abs(w), floor)
        p = -(V @ ((V.T @ g) / w))
        t = 1.0
        while True:
            xn = x + t * p
            fn = cp.value(xn)
            if fn <= f + 1e-4 * t * float(g @ p) or t < 1e-6:
                break
            t *= 0.25
        if t < 1e-6:
            # no measurable descent left; accept only if the step is tiny
            if np.linalg.norm(p) > 1e-6 * (1 + np.linalg.norm(x)):
                x = x + 1e-3 * p / max(1.0, float(np.linalg.norm(p)))
                f, g, H = cp.value_grad_hess(x)
                continue
            break
        x = xn
        f, g, H = cp.value_grad_hess(x)
    return x, f, g, H


def minimize_classify(e, starts: int = 16, seed: int = 0,
                      dedup_tol: float = DEDUP_TOL) -> list:
    """Local minima from damped-Newton descents started at random points.

    Minima are deduplicated by ``(T2, T3)`` and sorted by value, then ``T3``.
    The leading part must be positive on the attainable ``omega`` range,
    which is exactly the condition for the potential to be bounded below.
    ``e`` is an :class:`InvariantExpansion` or an invariant :class:`Poly5`.
    """
    if isinstance(e, Poly5):
        if e.degree() > MAX_DEGREE:
            raise ValueError("degree above 8")
        e = decompose_invariant(e - Poly5.const(e.coeff((0, 0, 0, 0, 0))))
    conv = convexity_check(e, ATTAINABLE)
    if not conv.convex:
        raise NonConvexError(f"leading part is not positive (min {conv.min_value:.6g} "
                             f"at omega={conv.witness_omega}, T3 sign {conv.witness_t3_sign})")
    ef = InvariantExpansion([float(v) for v in e])
    cp = CompiledPoly(expand(ef))
    t2p, t3p = invariants()
    rng = np.random.default_rng(seed)
    R = _start_radius(e)
    found = []
    for _ in range(starts):
        x0 = rng.normal(size=5)
        x0 *= R * rng.uniform(0.05, 1.0) / max(np.linalg.norm(x0), 1e-300)
        x, f, g, H = _damped_newton(cp, x0)
        w = np.linalg.eigvalsh((H + H.T) / 2)
        hs = max(1.0, float(np.max(np.abs(w))))
        if np.min(w) < -1e-6 * hs:
            continue
        t2 = float(evaluate(t2p, list(x)))
        t3 = float(evaluate(t3p, list(x)))
        found.append((x, f, t2, t3))
    uniq = []
    for x, f, t2, t3 in sorted(found, key=lambda r: (r[1], r[3], r[2])):
        dup = False
        for u in uniq:
            if abs(u[2] - t2) <= dedup_tol * max(1.0, abs(t2)) and \
                    abs(u[3] - t3) <= dedup_tol * max(1.0, abs(t3)):
                dup = True
                break
        if not dup:
            uniq.append((x, f, t2, t3))
    out = []
    for x, f, t2, t3 in uniq:
        if t2 < 1e-16:
            x = np.zeros(5)
            t2, t3 = 0.0, 0.0
        geo = orbit_geometry(list(x))
        out.append(MinimumRecord(tuple(float(v) for v in x), float(f), t2, t3,
                                 geo.omega_paper, geo.omega_trace, _label(t2, geo)))
    return sorted(out, key=lambda r: (r.value, r.t3, r.t2))

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given

from conftest import points, rationals
from ldgnormal.landau import InvariantExpansion, decompose_invariant
from ldgnormal.poly5 import Poly5, compose_shift, evaluate
from ldgnormal.so3rep import (CATALOG, catalog, check_covariance, commutator, covariant,
                              discrete_symmetry_check, from_qmatrix, generators, independent_count,
                              invariants, isotropy_residual, lie_derivative, molien_series,
                              orbit_geometry, orbit_space_structures, qmatrix)
from sympy_oracle import X, f2, t2_t3

T2, T3 = invariants()
x1, x2, x3, x4, x5 = Poly5.coords()


def _eps(i, j, k):
    return int(np.sign(np.linalg.det(np.eye(3)[[i, j, k]])))


def test_so3_commutators():
    g = generators()
    for i in range(3):
        for j in range(3):
            want = sum(_eps(i, j, k) * g.so3[k] for k in range(3))
            assert np.array_equal(commutator(g.so3[i], g.so3[j]), want)


def test_adjoint_commutators():
    g = generators()
    assert np.array_equal(commutator(g.adjoint[0], g.adjoint[1]), g.adjoint[2])
    for i in range(3):
        for j in range(3):
            want = sum(_eps(i, j, k) * g.adjoint[k] for k in range(3))
            assert np.array_equal(commutator(g.adjoint[i], g.adjoint[j]), want)


def test_j3_sample_entry():
    assert generators().adjoint[2][0, 1] == -2


def test_invariants_match_independent_statement():
    t2, t3 = t2_t3()
    sym = {(i,): X[i] for i in range(5)}
    for mine, ref in ((T2, t2), (T3, t3)):
        expr = sum(sp.Rational(c.numerator, c.denominator) * sp.prod([X[i]**e for i, e in enumerate(m)])
                   for m, c in mine.items())
        assert sp.expand(expr - ref) == 0
    assert len(T2) == 6


@given(rationals(), rationals())
def test_invariants_on_diagonal(l1, l2):
    assert evaluate(T2, (l1, 0, 0, l2, 0)) == l1**2 + l1 * l2 + l2**2
    assert evaluate(T3, (l1, 0, 0, l2, 0)) == -l1 * l2 * (l1 + l2)


def test_qmatrix_layout():
    Q = qmatrix((1, 0, 0, 1, 0))
    assert np.array_equal(Q.astype(int), np.diag([1, 1, -2]))
    assert from_qmatrix(np.diag([1, 0, -1])) == (1, 0, 0, 0, 0)


@given(points)
def test_qmatrix_round_trip(x):
    Q = qmatrix(x)
    assert sum(Q[i, i] for i in range(3)) == 0
    assert tuple(from_qmatrix(Q)) == tuple(x)


def test_qmatrix_rejects_bad_input():
    with pytest.raises(ValueError):
        from_qmatrix(np.diag([1, 1, 1]))
    with pytest.raises(ValueError):
        from_qmatrix(np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]]))


@given(points)
def test_trace_identities(x):
    Q = qmatrix([float(v) for v in x])
    assert math.isclose(np.trace(Q @ Q), 2 * float(evaluate(T2, x)), abs_tol=1e-9)
    assert math.isclose(np.trace(Q @ Q @ Q), 3 * float(evaluate(T3, x)), abs_tol=1e-9)


def test_lie_derivative_kills_invariants():
    for a in (1, 2, 3):
        assert lie_derivative(T2, a).is_zero()
        assert lie_derivative(T3, a).is_zero()


def test_lie_derivative_of_first_coordinate():
    assert lie_derivative(x1, 3) == x2.scale(-2)


def test_catalog_covariance():
    assert len(CATALOG) == 15
    for f in catalog():
        ok, res = check_covariance(f)
        assert ok, f.label
        assert all(c.degree() in (f.degree, -1) or c.is_zero() for c in f.field)


def test_non_covariant_field_fails():
    ok, res = check_covariance((x1**2, Poly5(), Poly5(), Poly5(), Poly5()))
    assert not ok and any(not r.is_zero() for vec in res for r in vec)


def test_f2_matches_independent_statement():
    ref = f2()
    for comp, r in zip(covariant("F2").field, ref):
        expr = sum(sp.Rational(c.numerator, c.denominator) * sp.prod([X[i]**e for i, e in enumerate(m)])
                   for m, c in comp.items())
        assert sp.expand(expr - sp.expand(r)) == 0
    assert covariant("F2").field[2] == (x2 * x5 - x3 * x4).scale(3)


def test_product_covariants():
    xs = Poly5.coords()
    assert covariant("F3").field == tuple(T2 * v for v in xs)
    assert covariant("F7_3").degree == 7
    with pytest.raises(KeyError):
        covariant("F9")


def test_f2_pushes_t2_to_t3():
    grad_dot = sum((T2.diff(i) * covariant("F2").field[i] for i in range(5)), Poly5())
    assert grad_dot == T3.scale(9)


def test_molien_series_values():
    assert molien_series("invariants", 8) == [1, 0, 1, 1, 1, 1, 2, 1, 2]
    assert molien_series("covariants", 8) == [0, 1, 1, 1, 2, 2, 2, 3, 3]
    assert molien_series("invariants", 0) == [1]


def test_molien_series_against_sympy():
    t = sp.Symbol("t")
    inv = sp.series(1 / ((1 - t**2) * (1 - t**3)), t, 0, 13).removeO()
    cov = sp.series((t + t**2) / ((1 - t**2) * (1 - t**3)), t, 0, 13).removeO()
    assert molien_series("invariants", 12) == [int(inv.coeff(t, k)) for k in range(13)]
    assert molien_series("covariants", 12) == [int(cov.coeff(t, k)) for k in range(13)]


def test_rank_counts_match_molien():
    inv = molien_series("invariants", 8)
    cov = molien_series("covariants", 8)
    for d in range(1, 9):
        assert independent_count(d, "invariants") == inv[d]
        assert independent_count(d, "covariants") == cov[d]
    assert independent_count(6, "invariants") == 2
    assert independent_count(7, "covariants") == 3


def test_orbit_geometry_on_line():
    g = orbit_geometry((1, 0, 0, 1, 0))
    assert g.t2 == 3 and g.t3 == -2
    assert math.isclose(g.omega_paper, 1 - 2 * math.sqrt(2) / 3, rel_tol=1e-14)
    assert g.omega_trace == 0
    assert orbit_geometry((0,) * 5).isotropic
    h = orbit_geometry((1, 0, 0, -1, 0))
    assert h.omega_paper == 1 and h.omega_trace == 1


@given(rationals(nonzero=True))
def test_uniaxial_line_has_zero_trace_omega(s):
    assert orbit_geometry((s, 0, 0, s, 0)).omega_trace == 0


def test_isotropy_residual_conventions():
    assert isotropy_residual(1, 0, "trace") == 0
    assert isotropy_residual(1, 1, "trace") == 0
    assert isotropy_residual(1, 0, "explicit") == -7


@given(rationals(), rationals())
def test_isotropy_identity_in_trace_convention(a, b):
    assert isotropy_residual(a, b, "trace") == 0


def test_discrete_symmetries():
    assert discrete_symmetry_check()
    from ldgnormal.so3rep import _DISCRETE, _substitute
    xs = Poly5.coords()
    assert _substitute(T3, _DISCRETE[0](xs)) == T3
    assert _substitute(T2, (x1, -x2, -x3, x4, x5)) == T2
    g = [evaluate(T2.__pow__(3).diff(i), (1, 0, 0, 1, 0)) for i in range(5)]
    assert g[1] == g[2] == g[4] == 0


def test_orbit_space_matrix_and_operator():
    os_ = orbit_space_structures(Fraction(2))
    assert os_.pi(1, 0) == ((4, 0), (0, Fraction(4, 3)))
    assert os_.L0({(2, 0): Fraction(5)}) == {(2, 0): 8 * 2 * Fraction(5)}
    assert os_.L0({(0, 1): Fraction(5)}) == {(0, 1): 0}
    gram = os_.gram()
    want = os_.pi(T2, T3)
    for a in range(2):
        for b in range(2):
            assert gram[a][b] == (want[a][b] if isinstance(want[a][b], Poly5) else Poly5.const(want[a][b]))


@given(rationals(), rationals())
def test_invariants_stay_invariant_after_covariant_shift(a, b):
    h = tuple(u.scale(a) + v.scale(b) for u, v in zip(covariant("F2").field, covariant("F4_1").field))
    out = compose_shift(T2 + T3, h, 8)
    for k in (1, 2, 3):
        assert lie_derivative(out, k).is_zero()
    assert isinstance(decompose_invariant(out), InvariantExpansion)

import math
from fractions import Fraction as F

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
import hypothesis.strategies as st

from ldgnormal.critical import (OMEGA_BRANCH, NonConvexError, branch_critical_value,
                                branch_points, branch_radicand, branch_stability,
                                closed_form_spectrum, collinearity_mu, existence_condition,
                                gradient_decomposition, minimize_classify, mu_values,
                                noncollinear_solutions, numeric_spectrum, reduced6_expansion,
                                reduced8_expansion, reduced_critical_radius, representative,
                                stability_threshold, transition_branch_hessian,
                                transition_branch_series)
from ldgnormal.landau import InvariantExpansion
from ldgnormal.surd import QuadraticSurd

LAMS = np.linspace(0.5, 100, 10)
ETAS = [-6.5, -5, -3.5, -2, -0.75, -0.1, 0.4, 1.5, 3, 6]


@pytest.mark.parametrize("case", "abcd")
def test_branch_omega_is_exact_surd(case):
    b = branch_points(case)
    assert b.omega_paper == OMEGA_BRANCH
    assert OMEGA_BRANCH == 1 - QuadraticSurd(0, F(2, 3), 2)
    assert abs(float(b.omega_paper) - 0.057191) < 1e-6


@settings(max_examples=30)
@given(st.fractions(-3, 3, max_denominator=9).filter(lambda v: v != 0), st.fractions(-1, 1, max_denominator=9), st.sampled_from("ab"))
def test_branch_points_ab_keep_omega(x1, t, case):
    # x4 = t x1 inside the admissible interval
    x4 = t * x1 / 2 if case == "a" else (1 + abs(t)) * x1
    b = branch_points(case, x1=x1, x4=x4)
    assert b.omega_paper == OMEGA_BRANCH
    mus = [lbl for lbl, _ in collinearity_mu(b.point)]
    assert case in mus


def test_branch_points_cd_general_slice():
    b = branch_points("c", x1=1.0, x2=0.7, x4=0.3)
    assert abs(float(b.omega_paper) - float(OMEGA_BRANCH)) < 1e-9
    assert "c" in [lbl for lbl, _ in collinearity_mu(b.point, tol=1e-8)]


def test_amplitude_reference_point():
    amp = branch_critical_value(100, F(-1, 2))
    assert amp.exists and amp.x1 == 1
    assert amp.gradient_residual == 0


@pytest.mark.parametrize("case", "abcd")
def test_amplitude_zeroes_gradient(case):
    amp = branch_critical_value(37.5, -2.25, case)
    assert amp.exists and amp.gradient_residual < 1e-10


@pytest.mark.parametrize("lam", [-3, -1, F(-1, 2), 0, F(1, 2), 1, 3])
@pytest.mark.parametrize("eta", [-10, F(-27, 4) - F(1, 10), F(-27, 4) + F(1, 10), -1, 0, 2])
def test_existence_sign_grid(lam, eta):
    rad = branch_radicand(lam, eta)
    expected = (lam >= 0 and eta > F(-27, 4)) or (lam <= 0 and eta < F(-27, 4))
    assert existence_condition(lam, eta) == expected
    assert (rad >= 0) == expected or lam == 0
    amp = branch_critical_value(lam, eta)
    assert amp.exists == expected


def test_gradient_decomposition_identity():
    x = (F(1, 2), F(1, 3), -1, F(2, 5), F(1, 7))
    d = gradient_decomposition(x, F(3), F(-2))
    assert d.residual == 0


def test_noncollinear_family():
    assert not noncollinear_solutions(1, 0).determined
    r = noncollinear_solutions(4, 1)
    assert r.determined and r.t3 == 0 and not r.admissible
    assert noncollinear_solutions(-4, 1).admissible


def test_collinearity_labels():
    labels = [lbl for lbl, _ in collinearity_mu((1, 0, 0, 1, 0))]
    assert "a" in labels and "b" in labels


def test_reduced_critical_radius():
    assert reduced_critical_radius(-3, 6) == 1
    assert reduced_critical_radius(-4, 8) == 1
    assert reduced_critical_radius(1, 6) is None


@pytest.mark.parametrize("lam", LAMS)
@pytest.mark.parametrize("eta", ETAS)
def test_cd_closed_form_spectrum_matches(lam, eta):
    for case in "cd":
        sp_ = branch_stability(case, lam, eta)
        assert sp_.agrees, (case, sp_.max_deviation)
        assert sp_.zero_count == 2


@pytest.mark.parametrize("lam", LAMS)
@pytest.mark.parametrize("eta", ETAS)
def test_ab_numeric_spectrum_has_halved_eigenvalue(lam, eta):
    # [DERIVED] numeric Hessian: {0, 0, s/2, s, 18 lam}, s = -18 eta lam / (27 + 4 eta)
    s = -18 * eta * lam / (27 + 4 * eta)
    for case in "ab":
        sp_ = branch_stability(case, lam, eta)
        want = sorted([0, 0, s / 2, s, 18 * lam])
        scale = max(abs(v) for v in want)
        assert max(abs(a - b) for a, b in zip(sp_.eigenvalues, want)) <= 1e-8 * scale
        assert sorted(closed_form_spectrum(case, lam, eta)) == sorted([0, 0, s, s, 18 * lam])


@pytest.mark.parametrize("lam", LAMS)
@pytest.mark.parametrize("eta", ETAS)
def test_stability_window(lam, eta):
    inside = -27 / 4 < eta < 0
    for case in "ac":
        assert branch_stability(case, lam, eta).stable == inside


def test_stability_needs_branch():
    with pytest.raises(ValueError):
        branch_stability("a", -1, 1)


def test_transition_series_symbolic():
    sol = transition_branch_series()
    g2, g3 = sp.symbols("gamma2 gamma3")
    # [DERIVED] order-by-order sympy solve
    want = [-1 / g2, 6 * g3 / g2**3, -72 * g3**2 / g2**5,
            (g2**2 + 1080 * g3**3) / g2**7, -36 * g3 * (g2**2 + 504 * g3**3) / g2**9]
    assert all(sp.simplify(a - b) == 0 for a, b in zip(sol.z, want))
    assert sol.gradient_residual_order >= 6
    assert sol.expected_matches[:3] == [True, True, True]


def test_transition_series_printed_top_terms_use_larger_sextic():
    # the printed z4, z5 are the s = 4 solution
    sol = transition_branch_series(sextic=4)
    assert sol.expected_matches == [True] * 5


def test_transition_series_numeric_point():
    sol = transition_branch_series(1, 0)
    assert [sp.nsimplify(v) for v in sol.z] == [-1, 0, 0, 1, 0]


def test_transition_hessian():
    th = transition_branch_hessian()
    assert th.matches["H1"] and th.matches["H2"] and th.matches["mu"]
    g2, g3 = sp.symbols("gamma2 gamma3")
    assert sp.simplify(th.lambda_s - g2**2 / (6 * g3)) == 0


@settings(max_examples=30)
@given(st.floats(0.2, 5), st.floats(-3, 3), st.floats(1e-4, 0.5))
def test_mu_signs_small_eps(g2, g3, frac):
    # small means eps well below lambda_s = g2^2 / (6 |g3|)
    eps = frac * g2**2 / (6 * abs(g3) + 1)
    m = mu_values(g2, g3, eps)
    assert m[0] < 0 and m[1] < 0 and m[2] > 0
    assert min(m) < 0


def test_stability_threshold():
    assert stability_threshold(3, F(1, 2)) == 3
    assert stability_threshold(3, 0) is None


def test_minimize_order6_degenerate_in_t3():
    c1 = -3.0
    mins = minimize_classify(reduced6_expansion(c1), starts=24, seed=1)
    t2 = math.sqrt(-c1 / 3)
    best = mins[0].value
    shell = [m for m in mins if abs(m.value - best) < 1e-9]
    assert all(abs(m.t2 - t2) < 1e-8 for m in shell)
    assert len({round(abs(m.t3), 6) for m in shell}) > 1


def test_minimize_order8_lifts_degeneracy():
    mins = minimize_classify(reduced8_expansion(8.0, -1.0), starts=24, seed=1)
    best = mins[0].value
    shell = [m for m in mins if abs(m.value - best) < 1e-9]
    assert len({round(abs(m.t3), 6) for m in shell}) == 1
    # eta < 0 pushes |T3| to its maximum: the uniaxial edge of the orbit space
    assert shell[0].label == "uniaxial"
    assert abs(shell[0].omega_paper - float(OMEGA_BRANCH)) < 1e-6


def test_minimize_order8_positive_eta_is_biaxial():
    mins = minimize_classify(reduced8_expansion(8.0, 1.0), starts=24, seed=1)
    assert mins[0].label == "biaxial" and abs(mins[0].t3) < 1e-8


def test_minimize_isotropic_and_refusal():
    mins = minimize_classify(reduced6_expansion(2.0))
    assert mins[0].label == "isotropic"
    with pytest.raises(NonConvexError):
        minimize_classify(InvariantExpansion.from_names({"T2": 1, "T3": 1}))


def test_minimize_is_deterministic():
    e = reduced8_expansion(5.0, -2.0)
    assert minimize_classify(e, seed=3) == minimize_classify(e, seed=3)


def test_representative_t2():
    for case in "abcd":
        pt = representative(case, 2.0)
        e = numeric_spectrum(reduced8_expansion(1.0, -1.0), pt)
        assert len(e) == 5

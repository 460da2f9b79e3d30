import math
from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings

from conftest import records
from ldgnormal.landau import BASIS_NAMES, LdGCoefficients, RegimeError
from ldgnormal.normalize import (GENERATORS, TransformCoefficients, apply_transform, oracle_solve,
                                 printed_regular8, reduce, regular_plan, transformed_expansion,
                                 validity_estimate)

import sympy_oracle


# [DERIVED] frozen from the sympy ring oracle (tests/sympy_oracle.py)
FROZEN6 = [
    ((1, 9, 0, 0, 0, 0),
     {"k1": F(-1), "k2": F(15, 2), "k3": F(-108), "k4": F(0), "k5": F(787, 8), "k6": F(243)},
     F(-783, 4), F(-2187)),
    ((F(1, 2), -3, 2, F(1, 3), 5, -1),
     {"k1": F(2, 3), "k2": F(4, 3), "k3": F(-13, 3), "k4": F(0), "k5": F(-112, 9),
      "k6": F(-50, 3)},
     F(121, 9), F(75)),
]


@pytest.mark.parametrize("cs,ks,alpha,beta", FROZEN6)
def test_order6_frozen_oracle_values(cs, ks, alpha, beta):
    r = reduce(LdGCoefficients.from_sequence(cs), 6)
    assert {f"k{i}": r.ks[i] for i in range(1, 7)} == ks
    assert r.extras["alpha"] == alpha and r.extras["beta"] == beta


def test_order6_matches_live_sympy_oracle():
    c = (F(2, 3), F(-1, 2), 1, 3, F(-2, 5), 2)
    ks, alpha, beta = sympy_oracle.order6_regular([sp.Rational(str(v)) for v in c])
    r = reduce(LdGCoefficients.from_sequence(c), 6)
    assert ks == {f"k{i}": sp.Rational(str(r.ks[i])) for i in range(1, 7)}
    assert sp.Rational(str(r.extras["alpha"])) == alpha
    assert sp.Rational(str(r.extras["beta"])) == beta


@settings(max_examples=30)
@given(records(6))
def test_order6_reduces_to_landred6(vals):
    c = LdGCoefficients.from_sequence(vals)
    r = reduce(c, 6)
    assert r.verified
    assert r.reduced.form == "LANDRED6"
    s = r.reduced.surviving
    assert s["T2"] == c.c1 and s["T2^3"] == 1
    assert all(v == 0 for n, v in zip(BASIS_NAMES, s) if n not in ("T2", "T2^3"))
    assert all(cmp.match for cmp in r.comparisons), [cmp.quantity for cmp in r.comparisons
                                                     if not cmp.match]


@settings(max_examples=8)
@given(records(6), records(6))
def test_order6_k4_is_free(vals, other):
    c = LdGCoefficients.from_sequence(vals)
    k4 = other[1] or F(1)
    r = reduce(c, 6, k4=k4)
    assert r.verified and r.ks[4] == k4
    # k1, k2 do not depend on the free k4
    r0 = reduce(c, 6)
    assert [r.ks[i] for i in (1, 2)] == [r0.ks[i] for i in (1, 2)]


@settings(max_examples=10)
@given(records(8, c2_nonzero=True))
def test_order8_full_reduces_to_landred8a(vals):
    c = LdGCoefficients.from_sequence(vals)
    r = reduce(c, 8, mode="full")
    assert r.verified and r.reduced.form == "LANDRED8A"
    s = r.reduced.surviving
    assert s["T2"] == c.c1 and s["T2^4"] == 1
    assert sum(1 for v in s if v) == (2 if c.c1 else 1)


@settings(max_examples=10)
@given(records(8))
def test_order8_xi_only_eta_matches_substitution(vals):
    c = LdGCoefficients.from_sequence(vals)
    r = reduce(c, 8, mode="xi_only")
    assert r.verified and r.reduced.form == "LANDRED8B"
    assert r.reduced.surviving["T2*T3^2"] == r.extras["eta"]
    cmp = {x.quantity: x for x in r.comparisons}
    assert cmp["eta (972 denominator)"].match
    assert cmp["eta (xi only)"].match


def test_printed_971_denominator_is_logged():
    c = LdGCoefficients.from_sequence([1, 9, 0, 0, 0, 0, 0, 0, 0])
    r = reduce(c, 8, mode="xi_only")
    cmp = {x.quantity: x for x in r.comparisons}
    assert not cmp["eta (printed 971 denominator)"].match
    assert cmp["eta (972 denominator)"].match
    assert r.extras["eta"] == r.reduced.surviving["T2*T3^2"]
    assert any("971" in n for n in r.notes)


def test_order8_full_needs_c2():
    c = LdGCoefficients.from_sequence([1, 0, 1, 0, 0, 0, 0, 0, 0])
    with pytest.raises(RegimeError):
        reduce(c, 8, mode="full")
    assert reduce(c, 8, mode="xi_only").verified


def test_regular_refuses_c1_zero():
    with pytest.raises(RegimeError):
        reduce(LdGCoefficients.from_sequence([0, 1]), 6, regime="regular")


def test_auto_regime():
    assert reduce(LdGCoefficients.from_sequence([1, 1]), 6, regime="auto").regime == "regular"
    assert reduce(LdGCoefficients.from_sequence([0, 1]), 6, regime="auto").regime == "singular"


def test_full_method_agrees_with_diagonal():
    c = LdGCoefficients.from_sequence([F(1, 2), -3, 2, F(1, 3), 5, -1])
    a = reduce(c, 6, method="diagonal")
    b = reduce(c, 6, method="full")
    assert a.ks == b.ks and a.residual.is_zero() and b.residual.is_zero()


def test_k1_alone_removes_cubic():
    c = LdGCoefficients.from_sequence([2, 3, 1, 0, 0, 1])
    ks = TransformCoefficients().replace({1: -c.c2 / (9 * c.c1)})
    e = transformed_expansion(c.expansion(), ks, 6)
    assert e["T3"] == 0 and e["T2"] == c.c1


def test_identity_transform_changes_nothing():
    c = LdGCoefficients.from_sequence([1, 2, 3, 4, 5, 6])
    e = transformed_expansion(c.expansion(), TransformCoefficients(), 6)
    assert e == c.expansion()
    rep = apply_transform(c, TransformCoefficients(), 6)
    assert rep.reduced.surviving == c.expansion()


def test_oracle_reproduces_closed_form():
    c = LdGCoefficients.from_sequence([F(-3, 2), 1, F(1, 4), -2, 1, F(2, 3)])
    ks = oracle_solve(c, 6, regular_plan(6), {4: F(0)})
    assert [ks[i] for i in range(1, 7)] == [reduce(c, 6).ks[i] for i in range(1, 7)]


def test_printed_order8_k5_k6_agree():
    c = LdGCoefficients.from_sequence([F(1, 2), -3, 2, F(1, 3), 5, -1, 2, 1, -1])
    r = reduce(c, 8)
    cmp = {x.quantity: x.match for x in r.comparisons}
    assert cmp["k5"] and cmp["k6"] and cmp["k8"] and cmp["k9"]
    assert set(printed_regular8(c, F(0))) >= {"k5", "k6", "k9_full"}


def test_validity_estimate():
    assert validity_estimate(None, TransformCoefficients()) == math.inf
    # k1 multiplies a quadratic field: radius 1/|k1|
    assert validity_estimate(None, TransformCoefficients().replace({1: F(4)})) == 0.25
    # k2 multiplies a cubic field: radius |k2|^(-1/2)
    assert validity_estimate(None, TransformCoefficients().replace({2: F(4)})) == 0.5


def test_report_json_is_exact():
    r = reduce(LdGCoefficients.from_sequence([1, 9]), 6)
    j = r.to_json({"order": 6})
    assert j["ks"]["k1"] == "-1/1"
    assert j["surviving"]["T2^3"] == "1/1"
    assert j["tool"]["version"] and j["config"] == {"order": 6}
    assert set(j["surviving"]) == set(BASIS_NAMES)
    assert len(GENERATORS) == 11

import json
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given

from conftest import records, rationals
from ldgnormal.landau import (ATTAINABLE, BASIS_NAMES, InvariantExpansion, LdGCoefficients,
                              NotInvariantError, build_potential, convexity_check,
                              decompose_invariant, expand, format_rational, parse_rational,
                              qomega_form, restrict_to_diagonal)
from ldgnormal.poly5 import Poly5, compose_shift
from ldgnormal.so3rep import catalog, covariant, invariants
from sympy_oracle import t2_t3

T2, T3 = invariants()
x1 = Poly5.var(0)


def test_basis_order_is_fixed():
    assert list(BASIS_NAMES) == ["T2", "T3", "T2^2", "T2*T3", "T2^3", "T3^2", "T2^2*T3",
                                 "T2*T3^2", "T2^4"]


def test_single_coefficient_potentials():
    c = LdGCoefficients.from_sequence([Fraction(1)] + [Fraction(0)] * 8)
    assert build_potential(c, 6) == T2
    c9 = LdGCoefficients.from_sequence([Fraction(0)] * 8 + [Fraction(1)])
    p = build_potential(c9, 8)
    assert p == T2**4 and p.degree() == 8


def test_order_six_rejects_high_coefficients():
    c9 = LdGCoefficients.from_sequence([Fraction(0)] * 8 + [Fraction(1)])
    with pytest.raises(ValueError):
        build_potential(c9, 6)


@given(records(order=8, c1_nonzero=False))
def test_build_decompose_round_trip(vals):
    c = LdGCoefficients.from_sequence(vals)
    assert decompose_invariant(build_potential(c, 8)) == c.expansion()
    line = restrict_to_diagonal(build_potential(c, 8))
    assert decompose_invariant(line, restrict_diagonal=True) == c.expansion()


def test_decompose_basis_element():
    e = decompose_invariant(T2 * T3)
    assert e["T2*T3"] == 1 and sum(1 for v in e if v) == 1


def test_decompose_rejects_non_invariant():
    with pytest.raises(NotInvariantError) as err:
        decompose_invariant(x1**2)
    assert not err.value.residual.is_zero()


def test_decompose_rejects_high_degree():
    with pytest.raises(ValueError):
        decompose_invariant(T3**3)


def test_decompose_after_f2_shift():
    k1 = Fraction(-4, 9)
    out = compose_shift(T2, tuple(f.scale(k1) for f in covariant("F2").field), 3)
    e = decompose_invariant(out)
    assert e["T2"] == 1 and e["T3"] == 9 * k1


@given(records(order=6, c1_nonzero=False), rationals(), rationals())
def test_decomposition_closed_under_covariant_shift(vals, a, b):
    c = LdGCoefficients.from_sequence(vals)
    fa, fb = covariant("F2").field, covariant("F5_2").field
    h = tuple(u.scale(a) + v.scale(b) for u, v in zip(fa, fb))
    decompose_invariant(compose_shift(build_potential(c, 6), h, 8))


def test_basis_is_independent():
    from ldgnormal.so3rep import _exact_rank, _flatten_coeffs
    polys = [expand(InvariantExpansion.from_names({n: 1})) for n in BASIS_NAMES]
    assert _exact_rank(_flatten_coeffs(polys)) == 9


def test_json_round_trip():
    c = LdGCoefficients.from_sequence([Fraction(-3, 2), 1, 0, 0, 0, 0, 0, 0, Fraction(7, 3)])
    doc = c.to_json()
    assert doc["c1"] == "-3/2" and doc["c2"] == "1/1"
    assert LdGCoefficients.from_json(json.loads(json.dumps(doc))) == c
    with pytest.raises(ValueError):
        LdGCoefficients.from_json({"c10": "1"})


def test_rational_parsing_accepts_unicode_minus():
    assert parse_rational("−3/2") == Fraction(-3, 2)
    assert format_rational(Fraction(4)) == "4/1"


def test_expansion_json_keys():
    e = InvariantExpansion.from_names({"T2^4": Fraction(1, 2)})
    assert list(e.to_json()) == ["T2", "T3", "T2^2", "T2*T3", "T2^3", "T3^2", "T2^2*T3",
                                 "T2*T3^2", "T2^4"]
    assert e.to_json()["T2^4"] == "1/2"


def test_qomega_examples():
    q, w = sp.symbols("q omega")
    e = InvariantExpansion.from_names({"T2^3": 1, "T3^2": 1})
    assert sp.simplify(qomega_form(e) - (1 + (1 - w)**2 / 6) * q**6) == 0
    assert sp.simplify(qomega_form(InvariantExpansion.from_names({"T2": 1})) - q**2) == 0
    t3 = qomega_form(InvariantExpansion.from_names({"T3": 1}))
    assert sp.simplify(t3 - (1 - w) * q**3 / sp.sqrt(6)) == 0


def test_convexity_examples():
    assert convexity_check(InvariantExpansion.from_names({"T2^3": 1})).convex
    assert convexity_check(InvariantExpansion.from_names({"T2^3": 1, "T3^2": 1, "T2": -5})).convex
    bad = convexity_check(InvariantExpansion.from_names({"T2^4": -1}))
    assert not bad.convex and bad.witness_omega is not None
    assert not convexity_check(InvariantExpansion.from_names({"T3": 1})).convex


def test_convexity_on_reachable_range():
    # T2^4 + eta T2 T3^2 is positive on the reachable range iff eta > -27/4
    for eta, full, reach in ((-6, False, True), (-7, False, False), (-5, True, True)):
        e = InvariantExpansion.from_names({"T2^4": 1, "T2*T3^2": Fraction(eta)})
        assert convexity_check(e).convex is full
        assert convexity_check(e, ATTAINABLE).convex is reach


def test_basis_polynomials_match_sympy_statement():
    t2, t3 = t2_t3()
    X = sp.symbols("x1:6")
    p = expand(InvariantExpansion.from_names({"T2^2*T3": 1}))
    expr = sum(sp.Rational(c.numerator, c.denominator) * sp.prod([X[i]**e for i, e in enumerate(m)])
               for m, c in p.items())
    assert sp.expand(expr - t2**2 * t3) == 0

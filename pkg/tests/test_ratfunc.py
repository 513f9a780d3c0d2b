from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from conftest import ELIGIBLE, eligible_classes, laurent_polys
from motzeta.errors import NotExpandable, NotRegularAtInfinity
from motzeta.grothring import POINT, GrothClass, evaluate
from motzeta.laurent import L, LaurentPoly
from motzeta.ratfunc import DenomFactor, TRational, eval_at_infinity, render_trational, series_coefficient

COUNTS = {s: 3 ** s.dim + 1 for s in ELIGIBLE}
COUNTS[POINT] = 1


def numeric(a: TRational, q, t):
    """Independent oracle: plug numbers in for L and T."""
    total = Fraction(0)
    for c, e, denom in a.terms():
        v = evaluate(c, q, COUNTS) * Fraction(t) ** e
        for f in denom:
            v /= Fraction(t) ** -f.m * Fraction(q) ** f.n - 1
        total += v
    return total


factors = st.tuples(st.integers(1, 3), st.integers(1, 3))
tterms = st.tuples(eligible_classes, st.integers(-3, 3), st.lists(factors, max_size=2))
trationals = st.lists(tterms, max_size=3).map(TRational)
# products are only modelled when one side is a multiple of the point class
scalar_terms = st.tuples(laurent_polys, st.integers(-3, 3), st.lists(factors, max_size=2))
scalar_trationals = st.lists(scalar_terms, max_size=3).map(TRational)
POINTS = [(Fraction(7, 2), Fraction(1, 5)), (Fraction(-3), Fraction(5, 7)), (Fraction(11, 3), Fraction(-2, 3))]


def test_basic_examples():
    one = TRational.scalar(1)
    inv = TRational.inverse_factor(1, 1)
    assert inv * TRational.scalar(L, -1) - TRational.scalar(1, 0) * inv * TRational.scalar(L, -1) == TRational()
    # (T^-1 L - 1) * 1/(T^-1 L - 1) == 1
    assert TRational([(L, -1, []), (-1, 0, [])]) * inv == one
    with pytest.raises(Exception):
        DenomFactor(0, 1)


def test_eval_at_infinity_examples():
    assert eval_at_infinity(TRational.inverse_factor(1, 1)) == GrothClass.scalar(-1)
    assert eval_at_infinity(TRational.scalar(1, -2)) == GrothClass()
    # T/(T^-1 L - 1) = -T + L/(T^-1 L - 1) has a pole
    with pytest.raises(NotRegularAtInfinity):
        eval_at_infinity(TRational.scalar(1, 1, [(1, 1)]))
    # T/(T^-1 L - 1) + T = L/(T^-1 L - 1) tends to -L
    v = TRational([(1, 1, [(1, 1)]), (1, 1, [])])
    assert eval_at_infinity(v) == GrothClass.scalar(-L)
    assert eval_at_infinity(TRational.scalar(1, 0, [(1, 1), (2, 3)])) == GrothClass.scalar(1)


def test_series_examples():
    inv = TRational.inverse_factor(2, 1)
    assert series_coefficient(inv, 0) == GrothClass()
    assert series_coefficient(inv, 2) == GrothClass.scalar(L**-1)
    assert series_coefficient(inv, 3) == GrothClass()
    assert series_coefficient(inv, 4) == GrothClass.scalar(L**-2)
    with pytest.raises(NotExpandable):
        series_coefficient(TRational.scalar(1, -1), 0)


def test_render():
    assert render_trational(TRational()) == "0"
    assert str(TRational.scalar(L - 1, 0, [(1, 2)])) == "(L-1)*[pt]/((T^-1 L^2 - 1))"


@given(trationals, scalar_trationals, trationals)
def test_arithmetic_matches_numeric_oracle(a, b, c):
    for q, t in POINTS:
        va, vb, vc = numeric(a, q, t), numeric(b, q, t), numeric(c, q, t)
        assert numeric(a * b + c, q, t) == va * vb + vc
        assert numeric(a - b, q, t) == va - vb


@given(trationals)
def test_normalize_preserves_value(a):
    n = a.normalize()
    assert n == a
    for q, t in POINTS:
        assert numeric(n, q, t) == numeric(a, q, t)


@given(trationals, trationals)
def test_equality_is_semantic(a, b):
    same = a == b
    values_agree = all(numeric(a, q, t) == numeric(b, q, t) for q, t in POINTS)
    if same:
        assert values_agree
    # rewriting one term through its denominator keeps equality
    rewritten = a + TRational([(L, -1, [(1, 1)]), (-1, 0, [(1, 1)]), (-1, 0, [])])
    assert rewritten == a


@given(trationals)
def test_dualize_P_involution(a):
    assert a.dualize_P().dualize_P() == a


@given(trationals, scalar_trationals)
def test_dualize_P_is_multiplicative(a, b):
    assert (a * b).dualize_P() == a.dualize_P() * b.dualize_P()


@given(trationals, st.integers(1, 3))
def test_substitution_numeric(a, m):
    for q, t in POINTS:
        assert numeric(a.substitute_Tm(m), q, t) == numeric(a, q, Fraction(t) ** m)


@given(st.lists(st.tuples(eligible_classes, st.integers(-3, 0), st.lists(factors, max_size=2)), max_size=3))
def test_eval_at_infinity_is_a_limit(terms):
    a = TRational(terms)
    # compare against large-T numeric evaluation with exact rational arithmetic
    v = evaluate(a.eval_at_infinity(), Fraction(5), COUNTS)
    big = numeric(a, 5, Fraction(10**40))
    assert abs(big - v) < Fraction(1, 10**20)


@given(st.lists(st.tuples(eligible_classes, st.integers(0, 3), st.lists(factors, max_size=2)), max_size=3))
def test_series_matches_numeric_expansion(terms):
    a = TRational(terms)
    q = Fraction(3)
    t = Fraction(1, 10**4)
    # truncated power series agrees with the value up to O(t^9)
    approx = sum(evaluate(a.series_coefficient(n), q, COUNTS) * t**n for n in range(9))
    assert abs(numeric(a, q, t) - approx) < t**8

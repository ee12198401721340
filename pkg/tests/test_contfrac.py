"""Continued fractions, approximants, gap bounds, the small-divisor sum."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from siegelab.contfrac import (AppendixConstants, ApproximantTable,
                               ContinuedFraction, QuadraticIrrational,
                               RangeError, alpha_value, appendix_constants,
                               approximants, bruno_partial, cf_expand,
                               dull_lemma_check, fibonacci, gap_bounds,
                               gap_sandwich_ok, parse_alpha, parse_cf_literal)

GOLDENISH = QuadraticIrrational(3, -1, 2, 5)  # (3 - sqrt 5)/2


# ---------------------------------------------------------------------------
# parsing and expansion


def test_parse_cf_literal_roundtrip():
    cf = parse_cf_literal("[0; 2,(1)]")
    assert cf.a0 == 0 and cf.pre == (2,) and cf.rep == (1,)
    assert parse_cf_literal(str(cf)) == cf


def test_parse_alpha_forms():
    assert parse_alpha("3/10") == Fraction(3, 10)
    assert parse_alpha("0.3") == Fraction(3, 10)
    q = parse_alpha("(3-sqrt(5))/2")
    assert q == GOLDENISH
    assert parse_alpha("(3-√5)/2") == GOLDENISH
    with pytest.raises(ValueError):
        parse_alpha("xyz")


def test_expand_quadratic_periodic():
    cf = cf_expand(GOLDENISH, 10)
    assert cf.a0 == 0
    assert cf.digits(10) == (2, 1, 1, 1, 1, 1, 1, 1, 1, 1)
    assert cf.periodic and cf.exact


def test_expand_rational_exact():
    cf = cf_expand(Fraction(3, 10), 10)
    assert cf.a0 == 0 and cf.pre == (3, 3) and cf.exact and cf.rational
    assert cf_expand(Fraction(1, 2), 10).pre == (2,)


def test_expand_rational_roundtrip():
    for f in (Fraction(3, 10), Fraction(7, 13), Fraction(355, 113)):
        assert cf_expand(f, 64).to_fraction() == f


def test_quadratic_value_fixed_point():
    # x = 1/(2 + y) with y = 1/(1 + y) characterizes [0; 2,1,1,...],
    # equivalently x^2 - 3x + 1 = 0
    with mp.workprec(128):
        x = GOLDENISH.value(128)
        y = parse_cf_literal("[0;(1)]").to_quadratic().value(128)
        assert abs(x - 1 / (2 + y)) < mpf(2) ** -120
        assert abs(x * x - 3 * x + 1) < mpf(2) ** -120


def test_to_quadratic_roundtrip():
    cf = parse_cf_literal("[0;2,(1)]")
    q = cf.to_quadratic()
    assert abs(q.value(128) - GOLDENISH.value(128)) < mpf(2) ** -120


# ---------------------------------------------------------------------------
# approximants


def test_approximant_q_sequence():
    cf = parse_cf_literal("[0; 2,1,1,1,1]")
    t = approximants(cf, 5)
    assert tuple(t.q(n) for n in range(6)) == (1, 2, 3, 5, 8, 13)


def test_q0_is_one_and_single_digit():
    t = approximants(parse_cf_literal("[0; 7]"), 1)
    assert t.q(0) == 1
    assert (t.p(1), t.q(1)) == (1, 7)


def test_range_error_beyond_digits():
    cf = parse_cf_literal("[0; 2,1]")
    with pytest.raises(RangeError):
        approximants(cf, 5)


def test_recurrence_and_coprimality():
    cf = cf_expand(GOLDENISH, 30)
    t = approximants(cf, 29)
    for n in range(2, 30):
        a = cf.digit(n)
        assert t.q(n) == a * t.q(n - 1) + t.q(n - 2)
        assert t.p(n) == a * t.p(n - 1) + t.p(n - 2)
        assert math.gcd(t.p(n), t.q(n)) == 1
        assert t.q(n) > t.q(n - 1)


def test_q_dominates_fibonacci():
    for lit in ("[0;2,(1)]", "[0;3,5,(2,7)]", "[0;2,9,50,(1)]"):
        cf = parse_cf_literal(lit)
        t = approximants(cf, 20)
        for n in range(21):
            assert t.q(n) >= fibonacci(n)


# ---------------------------------------------------------------------------
# gap bounds


def test_gap_bounds_exact_values():
    t = approximants(cf_expand(GOLDENISH, 10), 9)
    assert gap_bounds(t, 1) == (Fraction(1, 12), Fraction(1, 6))
    assert gap_bounds(t, 2) == (Fraction(1, 30), Fraction(1, 15))
    with pytest.raises(RangeError):
        gap_bounds(t, 9)


def test_gap_sandwich_golden():
    cf = cf_expand(GOLDENISH, 30)
    t = approximants(cf, 29)
    with mp.workprec(256):
        a = alpha_value(GOLDENISH, 256)
        assert abs(a - mpf(1) / 2) > mpf(1) / 12
        assert abs(a - mpf(1) / 2) < mpf(1) / 6
    for n in range(29):
        assert gap_sandwich_ok(GOLDENISH, t, n)


# ---------------------------------------------------------------------------
# the small-divisor sum


def test_bruno_single_term():
    t = ApproximantTable(((0, 0, 1), (1, 1, 2)))
    ev = bruno_partial(t, 0)
    with mp.workprec(256):
        assert abs(ev.partial - mp.log(2)) < mpf(2) ** -200


def test_bruno_matches_fibonacci_series():
    t = approximants(cf_expand(GOLDENISH, 35), 31)
    ev = bruno_partial(t, 30)
    with mp.workprec(256):
        direct = mp.fsum(mp.log(fibonacci(n + 1)) / fibonacci(n)
                         for n in range(31))
        assert abs(ev.partial - direct) < mpf("1e-20")


def test_bruno_huge_digit_term():
    t = approximants(parse_cf_literal("[0;2,100,(1)]"), 3)
    assert t.q(2) == 201
    ev = bruno_partial(t, 2)
    with mp.workprec(256):
        assert abs(ev.terms[1] - mp.log(201) / 2) < mpf(2) ** -200


def test_bruno_terms_positive_and_monotone():
    t = approximants(cf_expand(GOLDENISH, 25), 21)
    ev = bruno_partial(t, 20)
    assert all(term > 0 for term in ev.terms)
    partials = [bruno_partial(t, n).partial for n in range(21)]
    assert all(b > a for a, b in zip(partials, partials[1:]))


# ---------------------------------------------------------------------------
# Fibonacci convention and the appendix constants


def test_fibonacci_convention():
    assert [fibonacci(n) for n in range(6)] == [1, 2, 3, 5, 8, 13]


def test_appendix_constants_brackets():
    c = appendix_constants(80)
    assert mpf("1.96") <= c.s1 and c.s1 + c.tail1 < mpf("1.97")
    assert mpf("1.35") <= c.s2 and c.s2 + c.tail2 < mpf("1.36")
    assert c.tail1 > 0 and c.tail2 > 0


def test_appendix_constants_single_term():
    c = appendix_constants(1)
    with mp.workprec(256):
        assert abs(c.s1 - mp.log(2) / 2) < mpf(2) ** -200
        assert abs(c.s2 - mpf(1) / 2) < mpf(2) ** -200


def test_appendix_tails_rigorous():
    # the tail bound at depth m must cover the extra mass present at depth 2m
    a, b = appendix_constants(40), appendix_constants(80)
    assert b.s1 - a.s1 <= a.tail1
    assert b.s2 - a.s2 <= a.tail2


def test_dull_lemma():
    assert dull_lemma_check(24, 10000).ok
    assert dull_lemma_check(2, 10000).ok
    rep = dull_lemma_check(1, 10)
    assert not rep.ok
    assert rep.first_violation == 2


# ---------------------------------------------------------------------------
# properties


digit_lists = st.lists(st.integers(min_value=1, max_value=30),
                       min_size=2, max_size=12)


@settings(max_examples=60, deadline=None)
@given(digit_lists)
def test_property_q_independent_of_a0(digits):
    if digits[-1] == 1:
        digits = digits[:-1] + [2]
    c1 = ContinuedFraction(0, tuple(digits))
    c2 = ContinuedFraction(7, tuple(digits))
    t1 = approximants(c1, len(digits))
    t2 = approximants(c2, len(digits))
    assert all(t1.q(n) == t2.q(n) for n in range(len(digits) + 1))


@settings(max_examples=60, deadline=None)
@given(digit_lists)
def test_property_expand_roundtrip(digits):
    if digits[-1] == 1:
        digits = digits[:-1] + [2]
    f = ContinuedFraction(0, tuple(digits)).to_fraction()
    assert cf_expand(f, 64).digits(len(digits)) == tuple(digits)


@settings(max_examples=40, deadline=None)
@given(digit_lists, st.lists(st.integers(min_value=1, max_value=9),
                             min_size=1, max_size=4))
def test_property_gap_sandwich(pre, rep):
    cf = ContinuedFraction(0, tuple(pre), tuple(rep))
    alpha = cf.to_quadratic()
    t = approximants(cf, len(pre) + 2)
    for n in range(len(pre) + 2):
        assert gap_sandwich_ok(alpha, t, n)

"""Good approximants, nested parameter disks, sum splitting, the global
constant budget, and the seeded random-CF properties of the small-divisor
sum (independence of the integer part; symmetry under alpha -> 1 - alpha)."""

import dataclasses
import json
import random
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from siegelab.contfrac import (ContinuedFraction, QuadraticIrrational,
                               approximants, bruno_partial, cf_expand,
                               fibonacci, parse_alpha, parse_cf_literal)
from siegelab.ladder import (DiskLadder, build_ladder, constant_audit,
                             decomposition_ok, good_indices,
                             main_estimate_terms, main_estimate_terms_q,
                             split_sum, verify_nesting)

GOLDENISH = QuadraticIrrational(3, -1, 2, 5)
# digits engineered so q = 1, 2, 19, 952, ... puts both n = 1 and n = 2 in
# the good set (q_2 = 19 > 2*4, q_3 = 952 > 2*361)
ENGINEERED = parse_cf_literal("[0;2,9,50,(1)]")


def _table(alpha, depth):
    return approximants(cf_expand(alpha, depth + 4), depth + 1)


# ---------------------------------------------------------------------------
# the good index set


def test_goldenish_good_set_empty():
    assert len(good_indices(_table(GOLDENISH, 40), 40)) == 0


def test_engineered_good_set():
    good = good_indices(_table(ENGINEERED, 20), 20)
    assert 1 in good and 2 in good


def test_good_boundary_cases():
    # q_1 = 2 puts the membership threshold at 2 q_1^2 = 8, strictly
    t9 = approximants(parse_cf_literal("[0;2,4,(1)]"), 3)
    t7 = approximants(parse_cf_literal("[0;2,3,(1)]"), 3)
    assert t9.q(2) == 9 and 1 in good_indices(t9, 2)
    assert t7.q(2) == 7 and 1 not in good_indices(t7, 2)


# ---------------------------------------------------------------------------
# the disk ladder


def test_empty_ladder():
    t = _table(GOLDENISH, 20)
    lad = build_ladder(GOLDENISH, t, good_indices(t, 20))
    assert len(lad) == 0


def test_ladder_level_geometry():
    t = _table(ENGINEERED, 20)
    lad = build_ladder(ENGINEERED, t, good_indices(t, 20))
    assert len(lad) == 2
    with mp.workprec(256):
        a0 = ENGINEERED.to_quadratic().value(256)
        for lv in lad.levels:
            q = lv.q
            assert lv.radius_D == q * lv.radius_B  # radii ratio is exactly q
            assert len(lv.roots) == q
            gap = abs(a0 - mpf(lv.center.numerator) / q)
            for d in lv.roots:
                assert abs(abs(d) ** q - gap) < mpf("1e-60")
                assert abs(d) < lv.radius_U  # S_i inside U_i
            assert len({complex(x) for x in lv.roots}) == q


def test_ladder_json_schema():
    t = _table(ENGINEERED, 20)
    lad = build_ladder(ENGINEERED, t, good_indices(t, 20))
    doc = json.loads(lad.to_json())
    assert set(doc) == {"levels"}
    for lv in doc["levels"]:
        assert set(lv) == {"n_i", "p", "q", "rB", "rD", "rU", "S"}
        assert len(lv["S"]) == lv["q"]


def test_nesting_engineered():
    t = _table(ENGINEERED, 20)
    lad = build_ladder(ENGINEERED, t, good_indices(t, 20))
    rep = verify_nesting(lad, ENGINEERED)
    assert rep.ok
    names = [c[0] for c in rep.checks]
    assert "alpha0-in-B_1" in names and "D_1-clears-curve" in names
    assert "D_2-in-B_1" in names and "halving_1->2" in names


def test_nesting_single_level():
    cf = parse_cf_literal("[0;2,9,(1)]")
    t = approximants(cf, 10)
    lad = build_ladder(cf, t, good_indices(t, 5))
    assert len(lad) == 1
    rep = verify_nesting(lad, cf)
    assert rep.ok
    assert all("halving" not in c[0] for c in rep.checks)


def test_nesting_adversarial_inflated_disk():
    t = _table(ENGINEERED, 20)
    lad = build_ladder(ENGINEERED, t, good_indices(t, 20))
    bad_levels = list(lad.levels)
    bad_levels[1] = dataclasses.replace(bad_levels[1],
                                        radius_D=bad_levels[1].radius_D * 10)
    rep = verify_nesting(DiskLadder(lad.alpha0, tuple(bad_levels)), ENGINEERED)
    assert not rep.ok
    assert rep.failures()


def test_nesting_requires_level():
    t = _table(GOLDENISH, 20)
    lad = build_ladder(GOLDENISH, t, good_indices(t, 20))
    with pytest.raises(ValueError):
        verify_nesting(lad, GOLDENISH)


# ---------------------------------------------------------------------------
# sum splitting


def test_split_sum_goldenish():
    t = _table(GOLDENISH, 21)
    s = split_sum(t, 20, good_indices(t, 20))
    assert s.good_terms == 0
    assert s.full_sum < s.bad_bound
    assert s.strict


def test_split_sum_engineered_strict():
    t = _table(ENGINEERED, 21)
    s = split_sum(t, 20, good_indices(t, 21))
    assert s.strict and s.slack > 0


def test_split_sum_huge_digit_dominates():
    cf = parse_cf_literal("[0;2,1,1,100000,(1)]")
    t = approximants(cf, 10)
    good = good_indices(t, 8)
    assert 3 in good
    s = split_sum(t, 8, good)
    assert s.good_terms > s.full_sum / 2


def test_split_sum_depth_one():
    t = _table(GOLDENISH, 3)
    s = split_sum(t, 1, good_indices(t, 1))
    assert s.slack >= 0


# ---------------------------------------------------------------------------
# per-level terms and the budget


def test_main_estimate_terms_exact():
    t = _table(ENGINEERED, 5)
    t1, t2, t3 = main_estimate_terms(t, 1)
    with mp.workprec(256):
        assert abs(t1 + mp.log(19) / 2) < mpf("1e-60")
        assert abs(t2 - mp.log(96) / 2) < mpf("1e-60")
        assert abs(t3 - 3 * mp.log(16) / 7) < mpf("1e-60")


def test_q_form_tightens_f_form():
    t = _table(ENGINEERED, 6)
    for n in (2, 3):
        f1, f2, f3 = main_estimate_terms(t, n)
        g1, g2, g3 = main_estimate_terms_q(t, n)
        assert g1 == f1
        assert g2 <= f2 and g3 <= f3  # q_n >= F_n and both shapes decrease


def test_decomposition():
    t = _table(ENGINEERED, 5)
    assert decomposition_ok(t, 1) and decomposition_ok(t, 2)


def test_constant_audit_below_16():
    ca = constant_audit(60)
    assert ca.ok and ca.total < 16
    assert ca.tail > 0
    with mp.workprec(256):
        n1_slit, n1_mrange = ca.terms[0][2], ca.terms[0][3]
        assert abs(n1_slit - mp.log(96) / 2) < mpf("1e-60")
        assert abs(n1_mrange - 3 * mp.log(16) / 7) < mpf("1e-60")
        assert abs(ca.log8pi - mp.log(8 * mp.pi)) < mpf("1e-60")
        assert abs(float(n1_slit) - 2.282) < 1e-3
        assert abs(float(n1_mrange) - 1.188) < 1e-3
        assert abs(float(ca.log8pi) - 3.2242) < 1e-4


def test_constant_audit_tail_policies_agree():
    a = constant_audit(60, "golden")
    b = constant_audit(60, "two-step-doubling")
    assert a.ok and b.ok
    # policies differ only in the tail bound
    assert abs(a.partial - b.partial) == 0
    with pytest.raises(ValueError):
        constant_audit(60, "bogus")
    with pytest.raises(ValueError):
        constant_audit(5)


def test_constant_audit_tail_rigorous():
    # the tail bound at depth m covers the mass actually present at depth 2m
    a, b = constant_audit(30), constant_audit(60)
    assert b.partial - a.partial <= a.tail


def test_constant_audit_json():
    doc = json.loads(constant_audit(20).to_json())
    assert set(doc) >= {"terms", "tail", "log8pi", "total", "target"}
    assert doc["target"] == 16.0


# ---------------------------------------------------------------------------
# seeded random-CF properties of the small-divisor sum


def _random_cf_digits(rng, n_pre=14):
    return [rng.randint(1, 12) for _ in range(n_pre)]


def test_bruno_periodicity_100_random_cfs():
    rng = random.Random(20260824)
    for _ in range(100):
        digits = tuple(_random_cf_digits(rng))
        c0 = ContinuedFraction(0, digits, (1, 2))
        c5 = ContinuedFraction(5, digits, (1, 2))
        t0 = approximants(c0, 13)
        t5 = approximants(c5, 13)
        assert all(t0.q(n) == t5.q(n) for n in range(14))
        b0 = bruno_partial(t0, 12)
        b5 = bruno_partial(t5, 12)
        assert all(x == y for x, y in zip(b0.terms, b5.terms))


def test_bruno_symmetry_100_random_cfs():
    # B(1 - alpha) = B(alpha): for alpha = [0; a1, a2, ...] with a1 >= 2,
    # 1 - alpha = [0; 1, a1 - 1, a2, ...]; deep partial sums must agree
    # because both tails are geometrically small
    rng = random.Random(99173)
    with mp.workprec(256):
        for _ in range(100):
            digits = _random_cf_digits(rng)
            digits[0] = rng.randint(2, 12)  # alpha < 1/2
            alpha = ContinuedFraction(0, tuple(digits), (2, 1))
            mirror = ContinuedFraction(0, (1, digits[0] - 1) + tuple(digits[1:]),
                                       (2, 1))
            with mp.workprec(300):
                va = alpha.to_quadratic().value(300)
                vm = mirror.to_quadratic().value(300)
                assert abs((1 - va) - vm) < mpf(2) ** -290
            depth = 40
            ba = bruno_partial(approximants(alpha, depth + 1), depth)
            bm = bruno_partial(approximants(mirror, depth + 2), depth + 1)
            assert abs(ba.partial - bm.partial) < mpf("1e-12")


def test_symmetry_q_shift():
    # the mirror table satisfies q'_n = q_{n-1}-shifted relation:
    # q'_{n+1} = q_n for alpha with a1 >= 2
    alpha = parse_cf_literal("[0;3,5,2,(1)]")
    mirror = parse_cf_literal("[0;1,2,5,2,(1)]")
    ta = approximants(alpha, 10)
    tm = approximants(mirror, 11)
    assert all(tm.q(n + 1) == ta.q(n) for n in range(10))

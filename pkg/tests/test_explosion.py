"""Parabolic explosion: iterate series, slopes, branch tracking, collision
radii, and the Yoccoz-disk inequality scan."""

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpc, mpf

from siegelab.explosion import (CollisionWithZero, PrecisionFailure,
                                QuadraticMap, estimate_R, explosion_slopes,
                                iterate_series, key_inequality_audit,
                                leading_A, radial_path, track_chi,
                                verify_cycle_relation, yoccoz_bound)


def _symbolic_A(p: int, q: int, order: int = None):
    """Independent oracle: compose lambda*z + z^2 symbolically q times with
    lambda an exact root of unity and read off the z^(q+1) coefficient."""
    z = sp.symbols("z")
    lam = sp.exp(2 * sp.pi * sp.I * sp.Rational(p, q))
    expr = z
    for _ in range(q):
        expr = sp.expand(lam * expr + expr ** 2)
        expr = sp.Poly(expr, z).as_expr()
    poly = sp.Poly(sp.expand(expr), z)
    c = sp.simplify(poly.coeff_monomial(z ** (q + 1)))
    return complex(sp.N(c, 40))


# ---------------------------------------------------------------------------
# iterate series and A


def test_series_identity_map_parameter():
    s = iterate_series(Fraction(0, 1), 2)
    with mp.workprec(256):
        assert abs(s.coeff(1) - 1) < mpf("1e-70")
        assert abs(s.coeff(2) - 1) < mpf("1e-70")


def test_series_half():
    s = iterate_series(Fraction(1, 2), 4)
    with mp.workprec(256):
        assert abs(s.coeff(1) - 1) < mpf("1e-70")
        assert abs(s.coeff(2)) < mpf("1e-70")
        assert abs(s.coeff(3) + 2) < mpf("1e-70")
        assert abs(s.coeff(4) - 1) < mpf("1e-70")


def test_series_third_structure():
    s = iterate_series(Fraction(1, 3), 4)
    with mp.workprec(256):
        assert abs(s.coeff(1) - 1) < mpf("1e-30")
        assert abs(s.coeff(2)) < mpf("1e-30")
        assert abs(s.coeff(3)) < mpf("1e-30")
        assert abs(s.coeff(4)) > mpf("1e-10")


@pytest.mark.parametrize("p,q", [(1, 2), (1, 3), (2, 3), (1, 4), (2, 5)])
def test_leading_A_matches_symbolic_oracle(p, q):
    A = leading_A(Fraction(p, q))
    expected = _symbolic_A(p, q)
    assert abs(complex(A) - expected) < 1e-25


def test_series_agrees_with_pointwise_iteration():
    for p, q in ((1, 2), (1, 3), (2, 5)):
        s = iterate_series(Fraction(p, q), q + 2)
        pmap = QuadraticMap.from_alpha(Fraction(p, q))
        with mp.workprec(256):
            z = mpf("1e-3") * mp.e ** (0.7j)
            direct = pmap.iterate(z, q)
            via_series = s(z)
            # truncation error is O(|z|^{q+3}); generous constant for the
            # growth of the next coefficients
            assert abs(direct - via_series) < mpf("1e-3") ** (q + 3) * 10 ** 4


# ---------------------------------------------------------------------------
# slopes


def test_slopes_half():
    slopes = explosion_slopes(Fraction(1, 2))
    with mp.workprec(256):
        want = mp.sqrt(2 * mp.pi) * mp.e ** (1j * mp.pi / 4)
        vals = sorted([complex(s) for s in slopes], key=lambda v: v.real)
        assert abs(vals[1] - complex(want)) < 1e-30
        assert abs(vals[0] + complex(want)) < 1e-30


def test_slopes_integer_parameter():
    slopes = explosion_slopes(Fraction(0, 1))
    with mp.workprec(256):
        assert len(slopes) == 1
        assert abs(slopes[0] - (-2j * mp.pi)) < mpf("1e-70")


@pytest.mark.parametrize("p,q", [(1, 2), (1, 3), (2, 5), (3, 7)])
def test_slopes_are_roots(p, q):
    pq = Fraction(p, q)
    slopes = explosion_slopes(pq)
    A = leading_A(pq)
    with mp.workprec(256):
        target = -2j * mp.pi * q / A
        assert len(set(map(complex, slopes))) == q
        for s in slopes:
            assert abs(s ** q - target) < mpf("1e-60") * abs(target)


# ---------------------------------------------------------------------------
# branch tracking


def test_track_chi_first_order():
    pq = Fraction(1, 2)
    with mp.workprec(256):
        delta = mpf(1) / 8  # |delta|^2 = 1/64
        branch = track_chi(pq, 0, radial_path(delta))
        slope = explosion_slopes(pq)[0]
        chi = branch.chi()
        assert branch.samples[-1].residual < mpf("1e-60")
        assert abs(chi - slope * delta) < abs(slope * delta) * mpf("0.2")


def test_cycle_relation_small_delta():
    with mp.workprec(256):
        for p, q in ((1, 2), (1, 3)):
            delta = (mpf(1) / (2 * q ** 3)) ** (mpf(1) / q)
            err = verify_cycle_relation(Fraction(p, q), delta)
            assert err < mpf("1e-10")


def test_cycle_relation_zero_delta():
    assert verify_cycle_relation(Fraction(1, 2), 0) == 0


def test_branch_values_distinct():
    pq = Fraction(1, 3)
    with mp.workprec(256):
        delta = mpf("0.05")
        vals = [complex(track_chi(pq, j, radial_path(delta)).chi())
                for j in range(3)]
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(vals[i] - vals[j]) > 1e-3


def test_guard_radius_aborts():
    with pytest.raises(PrecisionFailure):
        track_chi(Fraction(1, 2), 0, radial_path(mpf("0.8")),
                  guard_radius=0.5)


# ---------------------------------------------------------------------------
# collision radius


def test_estimate_R_integer_parameter():
    est = estimate_R(Fraction(0, 1))
    assert abs(est.R - 1) < 1e-20


def test_estimate_R_half():
    est = estimate_R(Fraction(1, 2))
    assert abs(est.R - mpf(1) / 2) < mpf("1e-9")
    # the two nearest collision parameters: alpha integer (u = 1) and the
    # cycle-multiplier witness u = 3 at distance sqrt(1/4 + (ln3/2pi)^2)
    with mp.workprec(128):
        d2 = mp.sqrt(mpf(1) / 4 + (mp.log(3) / (2 * mp.pi)) ** 2)
        dists = sorted(abs(mpc(w) - mpf("0.5")) for w in est.witnesses)
        assert abs(dists[0] - mpf("0.5")) < 1e-9
        assert any(abs(d - d2) < 1e-6 for d in dists)


def test_estimate_R_third_bound():
    est = estimate_R(Fraction(1, 3))
    assert est.R >= mpf(1) / 27
    est2 = estimate_R(Fraction(2, 3))
    assert est2.R >= mpf(1) / 27


def test_collision_report_fields():
    d = estimate_R(Fraction(1, 2)).to_dict()
    assert set(d) >= {"p", "q", "R", "bound_1_over_q3", "margin", "witnesses"}
    assert float(d["margin"]) > 0


# ---------------------------------------------------------------------------
# Yoccoz disks and the key inequality


def test_yoccoz_bound_examples():
    b = yoccoz_bound(Fraction(1, 2), Fraction(0, 1))
    with mp.workprec(128):
        want = mp.sqrt(mpf(1) / 4 + (mp.log(2) / (2 * mp.pi)) ** 2) \
            - mp.log(2) / (2 * mp.pi)
        assert abs(b - want) < 1e-25
        assert abs(float(b) - 0.4017) < 5e-4
    b2 = yoccoz_bound(Fraction(1, 3), Fraction(1, 2))
    assert abs(float(b2) - 0.1203) < 5e-4


def test_yoccoz_bound_degenerate_zero():
    assert abs(yoccoz_bound(Fraction(1, 2), Fraction(1, 2))) < 1e-30


def test_key_inequality_small():
    rep = key_inequality_audit(12)
    assert rep.ok
    assert rep.min_margin > 0


def test_key_inequality_q2_margin():
    rep = key_inequality_audit(2)
    assert rep.ok
    # only candidate: q = 2, q' = 1; margin = yoccoz_bound - 1/8
    assert abs(rep.min_margin - (0.4017 - 0.125)) < 5e-4


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=40))
def test_property_yoccoz_exceeds_cube(q):
    # the worst q' for fixed q is scanned by the audit itself; spot-check
    # the closest-approach pair q' = q - 1, |p'/q' - p/q| = 1/(q(q-1))
    pq = Fraction(1, q)
    pqp = Fraction(1, q - 1) if q > 2 else Fraction(0, 1)
    assert yoccoz_bound(pq, pqp) > mpf(1) / q ** 3

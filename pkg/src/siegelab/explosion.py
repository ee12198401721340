"""Parabolic explosion of periodic cycles for P(z) = e^(2 pi i alpha) z + z^2.

At a rational rotation number p/q the origin is a parabolic fixed point of
multiplicity q+1 for the q-th iterate.  Perturbing alpha = p/q + delta^q
splits it into the fixed point 0 and a period-q cycle whose branches
chi(delta), chi(zeta delta), ... explode with slopes equal to the q-th
roots of -2 pi i q / A, where A is the leading coefficient of the iterate.

The collision radius R(p/q) is the largest radius around p/q in the
parameter plane on which the q-th iterate keeps simple fixed points; it is
computed from the resultant of the iterate equation and its z-derivative,
taken as a polynomial in the multiplier variable u = e^(2 pi i alpha).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
import sympy as sp
from mpmath import mp, mpf, mpc

from .contfrac import DEFAULT_PREC

MAX_RESULTANT_Q = 6  # the iterate has degree 2^q; beyond this the resultant blows up


class PrecisionFailure(ArithmeticError):
    """Cancellation exceeded the available precision budget."""


class NewtonDivergence(RuntimeError):
    """Newton correction failed to converge while following a branch."""

    def __init__(self, msg, last_sample=None):
        super().__init__(msg)
        self.last_sample = last_sample


class CollisionWithZero(RuntimeError):
    """A tracked branch collided with the fixed point at 0 (left the
    explosion disk)."""


# ---------------------------------------------------------------------------
# the quadratic map and truncated series


@dataclass(frozen=True)
class QuadraticMap:
    """P(z) = u z + z^2 with u = e^(2 pi i alpha)."""

    alpha: object  # mpf or mpc
    u: mpc
    c: mpc         # parameter of the affinely conjugated form z^2 + c
    omega0: mpc    # critical point -u/2

    @classmethod
    def from_alpha(cls, alpha, prec: int = DEFAULT_PREC) -> "QuadraticMap":
        with mp.workprec(prec):
            if isinstance(alpha, Fraction):
                alpha = mpf(alpha.numerator) / alpha.denominator
            a = mpc(alpha) if mp.im(mpc(alpha)) != 0 else mpf(mp.re(mpc(alpha)))
            u = mp.e ** (2j * mp.pi * a)
            return cls(a, +u, +(u / 2 - u * u / 4), +(-u / 2))

    def __call__(self, z):
        return self.u * z + z * z

    def deriv(self, z):
        return self.u + 2 * z

    def iterate(self, z, k: int):
        for _ in range(k):
            z = self(z)
        return z

    def iterate_with_deriv(self, z, k: int):
        """(P^k(z), d/dz P^k(z)) by the chain rule along the orbit."""
        d = mpc(1)
        for _ in range(k):
            d *= self.deriv(z)
            z = self(z)
        return z, d


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series c_1 z + c_2 z^2 + ... truncated at a fixed order.

    There is no constant term: these series represent maps fixing 0.
    """

    coefficients: tuple  # c_1..c_M
    order: int

    def __post_init__(self):
        if len(self.coefficients) != self.order:
            raise ValueError("coefficient count must equal the order")

    def coeff(self, k: int):
        """Coefficient of z^k, k >= 1."""
        if not 1 <= k <= self.order:
            raise IndexError(f"order {k} outside 1..{self.order}")
        return self.coefficients[k - 1]

    def __call__(self, z):
        acc = mpc(0)
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc * z

    def square(self) -> "TruncatedSeries":
        M = self.order
        c = self.coefficients
        out = []
        for k in range(1, M + 1):
            # coefficient of z^k in (sum c_i z^i)^2
            s = mpc(0)
            for i in range(1, k):
                s += c[i - 1] * c[k - i - 1]
            out.append(s)
        return TruncatedSeries(tuple(out), M)

    def scale_add(self, factor, other: "TruncatedSeries") -> "TruncatedSeries":
        """factor * self + other, truncated at the common order."""
        return TruncatedSeries(
            tuple(factor * a + b for a, b in zip(self.coefficients, other.coefficients)),
            self.order,
        )


def _as_rational(pq) -> Fraction:
    pq = Fraction(pq)
    return pq


def iterate_series(pq, order: int, prec: int = DEFAULT_PREC) -> TruncatedSeries:
    """Series of the q-th iterate of P_{p/q} about 0, to the given order.

    The iterate is z + A z^(q+1) + O(z^(q+2)): the linear coefficient is 1
    and coefficients 2..q vanish, both checked against the precision budget.
    """
    pq = _as_rational(pq)
    q = pq.denominator
    if order < q + 1:
        raise ValueError("order must be at least q + 1")
    with mp.workprec(prec):
        zeta = mp.e ** (2j * mp.pi * pq.numerator / q)
        s = TruncatedSeries((mpc(1),) + (mpc(0),) * (order - 1), order)
        for _ in range(q):
            s = s.scale_add(zeta, s.square())  # S <- zeta*S + S^2
        budget = mpf(2) ** (-(prec // 2))
        if abs(s.coeff(1) - 1) > budget:
            raise PrecisionFailure("linear coefficient of the iterate drifted from 1")
        for k in range(2, q + 1):
            if abs(s.coeff(k)) > budget:
                raise PrecisionFailure(f"coefficient {k} of the iterate failed to cancel")
        return s


def leading_A(pq, prec: int = DEFAULT_PREC) -> mpc:
    """Coefficient A of z^(q+1) in the q-th iterate of P_{p/q}; nonzero."""
    pq = _as_rational(pq)
    q = pq.denominator
    s = iterate_series(pq, q + 1, prec)
    A = s.coeff(q + 1)
    if abs(A) < mpf(2) ** (-(prec // 2)):
        raise PrecisionFailure("leading coefficient A vanished at working precision")
    return A


def explosion_slopes(pq, prec: int = DEFAULT_PREC) -> tuple:
    """The q distinct q-th roots of -2 pi i q / A, ordered by principal argument."""
    pq = _as_rational(pq)
    q = pq.denominator
    A = leading_A(pq, prec)
    with mp.workprec(prec):
        target = -2j * mp.pi * q / A
        base = abs(target) ** (mpf(1) / q)
        theta = mp.arg(target)
        roots = [base * mp.e ** (1j * (theta + 2 * mp.pi * k) / q) for k in range(q)]
        roots.sort(key=lambda s: mp.arg(s))
        return tuple(+r for r in roots)


# ---------------------------------------------------------------------------
# branch continuation


@dataclass(frozen=True)
class ChiSample:
    delta: mpc
    chi: mpc
    residual: mpf


@dataclass(frozen=True)
class ChiBranch:
    pq: Fraction
    slope_index: int
    samples: tuple[ChiSample, ...]

    def chi(self) -> mpc:
        """Branch value at the final path node."""
        return self.samples[-1].chi

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["delta_re", "delta_im", "chi_re", "chi_im", "residual"])
            for s in self.samples:
                w.writerow([mp.nstr(mp.re(s.delta), 25), mp.nstr(mp.im(s.delta), 25),
                            mp.nstr(mp.re(s.chi), 25), mp.nstr(mp.im(s.chi), 25),
                            mp.nstr(s.residual, 10)])


def radial_path(delta, nodes: int = 32) -> list:
    """Straight path from near 0 out to delta, in `nodes` equal steps."""
    return [delta * mpf(j) / nodes for j in range(1, nodes + 1)]


def _newton_cycle_point(pmap: QuadraticMap, q: int, z0, tol, max_iter: int = 50):
    """Newton iteration for P^q(z) - z = 0 from seed z0; returns (z, residual)."""
    z = z0
    for _ in range(max_iter):
        fz, dz = pmap.iterate_with_deriv(z, q)
        fz = fz - z
        dz = dz - 1
        if dz == 0:
            break
        step = fz / dz
        z = z - step
        if abs(step) <= tol * max(mpf(1), abs(z)):
            fz2, _ = pmap.iterate_with_deriv(z, q)
            return z, abs(fz2 - z)
    fz2, _ = pmap.iterate_with_deriv(z, q)
    res = abs(fz2 - z)
    if res <= tol:
        return z, res
    return None, res


def track_chi(pq, slope_index: int, delta_path: Sequence, tol=None,
              prec: int = DEFAULT_PREC, max_halvings: int = 12,
              guard_radius: float | None = None) -> ChiBranch:
    """Follow the cycle branch chi along a path of explosion parameters.

    Each node solves P_alpha^q(z) = z with alpha = p/q + delta^q by Newton
    correction seeded from the previous node (first seed: slope * delta).
    The path step is halved on divergence, up to `max_halvings` times.

    When `guard_radius` is given (the collision radius |alpha - p/q| < R
    inside which the branch is analytic and path-independent), any path
    node with |delta|^q beyond it aborts the continuation: outside that
    disk the branch value depends on the path taken around the collision
    parameters, so no single value can honestly be reported.
    """
    pq = _as_rational(pq)
    q = pq.denominator
    slopes = explosion_slopes(pq, prec)
    slope = slopes[slope_index % q]
    with mp.workprec(prec):
        if tol is None:
            tol = mpf(2) ** (-(prec - 16))
        tol = mpf(tol)
        samples = []
        z = None
        prev_delta = mpc(0)
        for target in delta_path:
            target = mpc(target)
            if guard_radius is not None and abs(target) ** q > guard_radius:
                raise PrecisionFailure(
                    f"|delta|^{q} = {mp.nstr(abs(target) ** q, 6)} exceeds the "
                    f"collision-free radius {mp.nstr(mpf(guard_radius), 6)}; "
                    "branch continuation is path-dependent beyond it")
            pending = [target]
            halvings = 0
            while pending:
                d = pending[-1]
                alpha = mpf(pq.numerator) / pq.denominator + d ** q
                pmap = QuadraticMap.from_alpha(alpha, prec)
                seed = z + slope * (d - prev_delta) if z is not None else slope * d
                znew, res = _newton_cycle_point(pmap, q, seed, tol)
                if znew is None:
                    halvings += 1
                    if halvings > max_halvings:
                        raise NewtonDivergence(
                            f"Newton failed near delta = {d} (residual {mp.nstr(res, 5)})",
                            last_sample=samples[-1] if samples else None)
                    pending.append((prev_delta + d) / 2)
                    continue
                if d != 0 and abs(znew) < abs(slope * d) * mpf("1e-6"):
                    raise CollisionWithZero(
                        f"branch collided with 0 at delta = {d}; collision radius exceeded")
                z, prev_delta = znew, d
                pending.pop()
                if d == target:
                    samples.append(ChiSample(+d, +z, +res))
        return ChiBranch(pq, slope_index % q, tuple(samples))


def verify_cycle_relation(pq, delta, tol=None, prec: int = DEFAULT_PREC,
                          nodes: int = 32) -> mpf:
    """Max over the q branches of |P_alpha(chi(delta)) - chi(zeta delta)|.

    Tracks every branch to both delta and zeta*delta (same perturbed
    parameter alpha = p/q + delta^q) and evaluates the conjugacy relation
    that makes the branch values a period-q cycle.
    """
    pq = _as_rational(pq)
    q = pq.denominator
    with mp.workprec(prec):
        delta = mpc(delta)
        if delta == 0:
            return mpf(0)
        zeta = mp.e ** (2j * mp.pi * pq.numerator / q)
        alpha = mpf(pq.numerator) / q + delta ** q
        pmap = QuadraticMap.from_alpha(alpha, prec)
        worst = mpf(0)
        for j in range(q):
            b1 = track_chi(pq, j, radial_path(delta, nodes), tol, prec)
            b2 = track_chi(pq, j, radial_path(zeta * delta, nodes), tol, prec)
            err = abs(pmap(b1.chi()) - b2.chi())
            worst = max(worst, err)
        return +worst


# ---------------------------------------------------------------------------
# collision radius via the resultant in the multiplier variable


@lru_cache(maxsize=None)
def _collision_polynomial(q: int) -> tuple[int, ...]:
    """Square-free integer polynomial in u whose roots are the multipliers
    where the q-th iterate of z -> u z + z^2 has a multiple fixed point.

    Coefficients are returned highest degree first.
    """
    u, z = sp.symbols("u z")
    h = sp.Poly(u * z + z ** 2, z, domain=sp.ZZ[u])
    for _ in range(q - 1):
        h = sp.Poly(u * h.as_expr() + h.as_expr() ** 2, z, domain=sp.ZZ[u])
    F = h - sp.Poly(z, z, domain=sp.ZZ[u])
    res = sp.Poly(sp.resultant(F, F.diff(z), z), u)
    sqf = sp.div(res, sp.gcd(res, res.diff(u)), u)[0]
    return tuple(int(c) for c in sqf.all_coeffs())


def _poly_roots_polished(coeffs: tuple[int, ...], prec: int) -> list:
    """All roots: double-precision companion-matrix seeds polished by Newton."""
    fc = np.array([float(sp.Float(c, 20)) for c in coeffs])
    fc /= np.abs(fc).max()
    seeds = np.roots(fc)
    cs = [mpc(c) for c in coeffs]
    dcs = [mpc(c * (len(cs) - 1 - i)) for i, c in enumerate(coeffs[:-1])]

    def horner(poly, x):
        acc = mpc(0)
        for c in poly:
            acc = acc * x + c
        return acc

    roots = []
    with mp.workprec(prec):
        stop = mpf(2) ** (-(prec - 40))
        for s in seeds:
            x = mpc(complex(s))
            for _ in range(80):
                d = horner(dcs, x)
                if d == 0:
                    break
                step = horner(cs, x) / d
                x = x - step
                if abs(step) <= stop * max(mpf(1), abs(x)):
                    break
            roots.append(+x)
    return roots


@dataclass(frozen=True)
class CollisionRadiusEstimate:
    pq: Fraction
    R: mpf
    witnesses: tuple       # alpha-plane points with a multiple fixed point
    method: str = "resultant"

    @property
    def r(self) -> mpf:
        """q-th root of R: the radius of the explosion-variable disk."""
        return R_root(self.R, self.pq.denominator)

    def to_dict(self):
        return {
            "p": self.pq.numerator,
            "q": self.pq.denominator,
            "R": mp.nstr(self.R, 25),
            "bound_1_over_q3": mp.nstr(mpf(1) / self.pq.denominator ** 3, 25),
            "margin": mp.nstr(self.R - mpf(1) / self.pq.denominator ** 3, 25),
            "witnesses": [[mp.nstr(mp.re(w), 20), mp.nstr(mp.im(w), 20)]
                          for w in self.witnesses],
        }


def R_root(R, q: int) -> mpf:
    return mpf(R) ** (mpf(1) / q)


def estimate_R(pq, search_radius=1.0, prec: int = DEFAULT_PREC) -> CollisionRadiusEstimate:
    """Collision radius R(p/q): distance from p/q to the nearest parameter
    where the q-th iterate has a multiple fixed point, capped at search_radius.

    Each resultant root u* is mapped to the alpha sheet nearest p/q via the
    principal branch of log(u*/zeta)/(2 pi i) and its two neighbouring
    sheets; the point p/q itself is excluded.
    """
    pq = _as_rational(pq)
    q = pq.denominator
    if q > MAX_RESULTANT_Q:
        raise ValueError(f"resultant oracle supports q <= {MAX_RESULTANT_Q}")
    coeffs = _collision_polynomial(q)
    roots = _poly_roots_polished(coeffs, prec)
    with mp.workprec(prec):
        cap = mpf(search_radius)
        center = mpf(pq.numerator) / q
        zeta = mp.e ** (2j * mp.pi * pq.numerator / q)
        best = cap
        witnesses = []
        for ustar in roots:
            if abs(ustar) < mpf("1e-30"):
                continue
            w = mp.log(ustar / zeta) / (2j * mp.pi)
            for k in (-1, 0, 1):
                d = abs(w + k)
                if d < mpf("1e-40"):
                    continue  # p/q itself
                if d <= cap:
                    witnesses.append(+(center + w + k))
                if d < best:
                    best = d
        witnesses.sort(key=lambda a: abs(a - center))
        return CollisionRadiusEstimate(pq, +best, tuple(witnesses))


# ---------------------------------------------------------------------------
# Yoccoz-disk arithmetic


def yoccoz_bound(pq, pq_prime, prec: int = DEFAULT_PREC) -> mpf:
    """Lower bound on |alpha - p/q| when alpha sits in the disk of radius
    log(2)/(2 pi q') tangent to the real axis at p'/q'."""
    pq, pqp = _as_rational(pq), _as_rational(pq_prime)
    with mp.workprec(prec):
        h = mp.log(2) / (2 * mp.pi * pqp.denominator)
        dx = mpf(pqp.numerator) / pqp.denominator - mpf(pq.numerator) / pq.denominator
        return +(mp.sqrt(dx * dx + h * h) - h)


def _yoccoz_bound_float(dx: float, qprime: int) -> float:
    h = math.log(2) / (2 * math.pi * qprime)
    return math.hypot(dx, h) - h


@dataclass(frozen=True)
class KeyInequalityReport:
    q_max: int
    min_margin: float
    argmin: tuple  # (p, q, p', q') achieving the minimal margin
    min_parabolic_margin: float
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations and self.min_margin > 0

    def to_dict(self):
        return {
            "q_max": self.q_max,
            "min_margin": self.min_margin,
            "argmin": list(self.argmin),
            "min_parabolic_margin": self.min_parabolic_margin,
            "violations": [list(v) for v in self.violations],
            "ok": self.ok,
        }


def key_inequality_audit(q_max: int) -> KeyInequalityReport:
    """Exhaustive scan showing the Yoccoz-disk distance beats 1/q^3.

    For every 2 <= q <= q_max, every q' < q, every p coprime to q and every
    p' coprime to q' (fractions taken in [0, 1]), the bound
    sqrt((p'/q' - p/q)^2 + h^2) - h with h = log(2)/(2 pi q') must exceed
    1/q^3; distances obey |p'/q' - p/q| >= 1/(q q').  The parabolic case
    contributes the companion margin 1/q - 1/q^3.
    """
    if q_max < 2:
        raise ValueError("q_max must be >= 2")
    min_margin = math.inf
    argmin = ()
    violations = []
    min_parab = math.inf
    for q in range(2, q_max + 1):
        bound3 = 1.0 / q ** 3
        min_parab = min(min_parab, 1.0 / q - bound3)
        ps = [p for p in range(1, q) if math.gcd(p, q) == 1]
        for qp in range(1, q):
            pps = [pp for pp in range(0, qp + 1) if math.gcd(pp, qp) == 1]
            for p in ps:
                x = p / q
                for pp in pps:
                    dx = abs(pp / qp - x)
                    assert dx * q * qp >= 1 - 1e-9  # classical separation
                    margin = _yoccoz_bound_float(dx, qp) - bound3
                    if margin < min_margin:
                        min_margin = margin
                        argmin = (p, q, pp, qp)
                    if margin <= 0:
                        violations.append((p, q, pp, qp, margin))
    return KeyInequalityReport(q_max, min_margin, argmin, min_parab,
                               tuple(violations))


def collision_report_json(estimates: Sequence[CollisionRadiusEstimate]) -> str:
    return json.dumps([e.to_dict() for e in estimates], indent=2)

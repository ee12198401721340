"""Siegel-disk conformal radius from the linearization power series.

The normalized linearizer h (h(0) = 0, h'(0) = 1) conjugates the rotation
to P(z) = lambda z + z^2 through h(lambda w) = lambda h(w) + h(w)^2, giving
the coefficient recursion h_n = (sum_{i+j=n} h_i h_j) / (lambda^n - lambda).
Its radius of convergence equals the conformal radius of the Siegel disk;
we adopt this classical identity as the computational route.

The coefficient recursion runs on gmpy2 complex numbers: the quadratic
convolution is the hot loop and needs C-speed big-float arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpc as gc, mpfr as gf
from mpmath import mp, mpf

from . import contfrac
from .contfrac import (DEFAULT_PREC, AlphaLike, ContinuedFraction,
                       QuadraticIrrational, RationalAlphaError, approximants,
                       bruno_partial, cf_expand)


class SmallDivisorError(ArithmeticError):
    """|lambda^n - lambda| fell below the precision floor: alpha is too close
    to a rational for the working precision."""

    def __init__(self, n: int, magnitude):
        super().__init__(
            f"small divisor underflow at n = {n} (|lambda^n - lambda| = {magnitude})")
        self.n = n
        self.magnitude = magnitude


def _to_gmpy_real(alpha: AlphaLike, prec: int):
    """Exact-as-possible conversion of a rotation number to a gmpy2 real."""
    with gmpy2.context(precision=prec + 16):
        if isinstance(alpha, QuadraticIrrational):
            return (alpha.a + alpha.b * gmpy2.sqrt(gf(alpha.d))) / alpha.c
        if isinstance(alpha, ContinuedFraction):
            if alpha.periodic:
                return _to_gmpy_real(alpha.to_quadratic(), prec)
            if alpha.rational:
                f = alpha.to_fraction()
                return gf(f.numerator) / f.denominator
            t = approximants(alpha, len(alpha.pre))
            return gf(t.p(len(alpha.pre))) / t.q(len(alpha.pre))
        if isinstance(alpha, Fraction):
            return gf(alpha.numerator) / alpha.denominator
        if isinstance(alpha, mpf):
            sign, man, exp, _ = alpha._mpf_
            v = gf(man) * gf(2) ** exp
            return -v if sign else v
        return gf(alpha)


@dataclass(frozen=True)
class Linearizer:
    """Truncated linearizer: lambda, coefficients h_1..h_N and the precision
    they were computed at.  Coefficients are gmpy2 complex values."""

    alpha: object
    lam: gc
    coefficients: tuple  # index k holds h_{k+1}; coefficients[0] == 1
    precision: int

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def coeff(self, n: int) -> gc:
        """h_n for 1 <= n <= N."""
        if not 1 <= n <= self.order:
            raise IndexError(f"coefficient index {n} outside 1..{self.order}")
        return self.coefficients[n - 1]

    def evaluate(self, w) -> gc:
        """h(w) by Horner evaluation of the truncated series."""
        with gmpy2.context(precision=self.precision):
            w = gc(w)
            acc = gc(0)
            for c in reversed(self.coefficients):
                acc = acc * w + c
            return acc * w

    def functional_equation_residual(self, w) -> mpf:
        """|h(lambda w) - lambda h(w) - h(w)^2| at the sample point w."""
        with gmpy2.context(precision=self.precision):
            w = gc(w)
            lhs = self.evaluate(self.lam * w)
            hw = self.evaluate(w)
            return mpf(str(abs(lhs - self.lam * hw - hw * hw)))

    def log_abs_coeffs(self) -> list:
        """log |h_n| as floats for n = 1..N (exponents exceed double range,
        so the log is taken in big-float arithmetic)."""
        out = []
        with gmpy2.context(precision=64):
            for c in self.coefficients:
                a = abs(c)
                out.append(float(gmpy2.log(a)) if a > 0 else float("-inf"))
        return out

    def write_csv(self, path):
        logs = self.log_abs_coeffs()
        with open(path, "w", newline="") as fh:
            fh.write("n,log_abs_h_n\n")
            for n, v in enumerate(logs, start=1):
                fh.write(f"{n},{v!r}\n")


def linearizer_coeffs(alpha: AlphaLike, N: int,
                      precision: int = DEFAULT_PREC) -> Linearizer:
    """Coefficients h_1..h_N of the normalized linearizer of
    z -> e^(2 pi i alpha) z + z^2.

    Aborts with SmallDivisorError at the first n where |lambda^n - lambda|
    drops below 2^(-precision/2); rational alpha always trips this at
    n - 1 = order of lambda as a root of unity.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    a = _to_gmpy_real(alpha, precision)
    with gmpy2.context(precision=precision):
        two_pi = 2 * gmpy2.const_pi()
        lam = gmpy2.exp(gc(0, 1) * two_pi * a)
        floor = gf(2) ** (-(precision // 2))
        h = [gc(1)]  # h_1
        lam_pow = lam
        for n in range(2, N + 1):
            lam_pow *= lam
            div = lam_pow - lam
            if abs(div) < floor:
                raise SmallDivisorError(n, float(abs(div)))
            s = gc(0)
            half = n // 2
            for i in range(1, half + 1):
                j = n - i
                hi, hj = h[i - 1], h[j - 1]
                s += hi * hi if i == j else 2 * hi * hj
            h.append(s / div)
    return Linearizer(alpha, lam, tuple(h), precision)


# ---------------------------------------------------------------------------
# radius of convergence estimation


@dataclass(frozen=True)
class RadiusEstimate:
    r: mpf
    method: str            # estimator backing `r`
    window: tuple          # index range used by the tail fit
    spread: float          # relative disagreement between the two estimators
    r_hadamard: mpf
    r_tailfit: mpf
    converged: bool        # False when the spread exceeds 10%

    def to_dict(self):
        return {
            "r": mp.nstr(self.r, 20),
            "method": self.method,
            "window": list(self.window),
            "spread": self.spread,
            "r_hadamard": mp.nstr(self.r_hadamard, 20),
            "r_tailfit": mp.nstr(self.r_tailfit, 20),
            "converged": self.converged,
        }


def radius_estimate(lin: Linearizer) -> RadiusEstimate:
    """Radius of convergence by two estimators: the inverted running max of
    |h_n|^(1/n) and a least-squares slope of log|h_n| over the tail window
    (last quartile, at least 100 points).  Disagreement is reported as
    `spread`, never averaged away."""
    N = lin.order
    logs = lin.log_abs_coeffs()
    sup = max(l / n for n, l in enumerate(logs, start=1) if l != float("-inf"))
    r_hadamard = mp.e ** (-mpf(sup))
    lo = min(max(1, N - max(N // 4, 100)), N - 2)
    window = range(lo + 1, N + 1)  # coefficient indices n
    xs = list(window)
    ys = [logs[n - 1] for n in xs]
    nw = len(xs)
    xbar = sum(xs) / nw
    ybar = sum(ys) / nw
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / \
        sum((x - xbar) ** 2 for x in xs)
    r_tailfit = mp.e ** (-mpf(slope))
    mean = (r_hadamard + r_tailfit) / 2
    spread = float(abs(r_hadamard - r_tailfit) / mean)
    return RadiusEstimate(+r_tailfit, "tail-fit", (xs[0], xs[-1]), spread,
                          +r_hadamard, +r_tailfit, spread <= 0.10)


def siegel_radius(alpha: AlphaLike, N: int = 4000,
                  precision: int = DEFAULT_PREC) -> RadiusEstimate:
    """Siegel-disk conformal radius estimate for an irrational rotation
    number, from N linearizer coefficients."""
    _reject_rational(alpha)
    lin = linearizer_coeffs(alpha, N, precision)
    return radius_estimate(lin)


def _reject_rational(alpha: AlphaLike):
    if isinstance(alpha, Fraction) or isinstance(alpha, int):
        raise RationalAlphaError(f"alpha = {alpha} is rational")
    if isinstance(alpha, ContinuedFraction) and alpha.rational:
        raise RationalAlphaError("alpha expands to a terminated rational")


# ---------------------------------------------------------------------------
# the headline check: B(alpha) + log r(alpha)


def bruno_tail_bound(table, depth: int, a_max: int,
                     prec: int = DEFAULT_PREC) -> mpf:
    """Rigorous bound on sum_{n > depth} log(q_{n+1})/q_n when every digit
    beyond the depth is at most a_max.

    Uses q_{n+1} <= (a_max + 1) q_n together with the two-step doubling
    q_{n+2} >= 2 q_n, i.e. q_{depth+j} >= q_{depth+1} sqrt(2)^(j-1)."""
    with mp.workprec(prec):
        q1 = mpf(table.q(depth + 1))
        K = mp.log(a_max + 1)
        rho = mp.sqrt(2)
        # term_n <= (K + log q_n)/q_n, decreasing in q_n; q_n >= q1 rho^j
        # sum_j (K + log q1 + j log rho) / (q1 rho^j)
        x = 1 / rho
        geo = 1 / (1 - x)                 # sum x^j
        ageo = x / (1 - x) ** 2           # sum j x^j
        return +(((K + mp.log(q1)) * geo + mp.log(rho) * ageo) / q1)


@dataclass(frozen=True)
class TheoremReport:
    """B_partial + log r and the margin against the budget constant 16."""

    alpha: str
    B_partial: mpf
    tail_bound: mpf | None   # rigorous Bruno tail when the expansion is periodic
    tail_note: str
    log_r: mpf
    total: mpf               # B_partial + log_r
    margin_vs_16: mpf        # 16 - total - tail_bound (tail counted when known)
    radius: RadiusEstimate

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "B_partial": mp.nstr(self.B_partial, 25),
            "tail_bound": None if self.tail_bound is None else mp.nstr(self.tail_bound, 10),
            "tail_note": self.tail_note,
            "log_r": mp.nstr(self.log_r, 25),
            "total": mp.nstr(self.total, 25),
            "margin_vs_16": mp.nstr(self.margin_vs_16, 25),
            "radius": self.radius.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def theorem_check(alpha: AlphaLike, depth_N: int = 40, series_N: int = 4000,
                  precision: int = DEFAULT_PREC) -> TheoremReport:
    """Evaluate B_partial + log r(alpha) and its margin below 16."""
    _reject_rational(alpha)
    cf = cf_expand(alpha, depth_N + 2, precision)
    if cf.rational:
        raise RationalAlphaError("alpha expands to a terminated rational")
    depth = min(depth_N, int(cf.num_digits()) - 1 if cf.num_digits() != float("inf")
                else depth_N)
    table = approximants(cf, depth + 1)
    bruno = bruno_partial(table, depth, precision)
    est = siegel_radius(alpha, series_N, precision)
    with mp.workprec(precision):
        log_r = mp.log(est.r)
        if cf.periodic:
            tail = bruno_tail_bound(table, depth, max(cf.rep), precision)
            note = "periodic expansion: tail bounded rigorously and included in the margin"
        else:
            tail = None
            note = (f"expansion truncated at depth {depth}; "
                    "reported sum is a partial sum only")
        total = bruno.partial + log_r
        margin = 16 - total - (tail if tail is not None else mpf(0))
        return TheoremReport(str(alpha), +bruno.partial, tail, note, +log_r,
                             +total, +margin, est)

"""Good-approximant machinery: the index set of denominators with
q_{n+1} > 2 q_n^2, the nested parameter disks built on them, the sum
splitting into good and bad contributions, and the global constant audit
whose budget lands strictly below 16.

Disk inclusions are decided in exact rational arithmetic on centers and
radii; only the explosion-variable radii (q-th roots) need floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf, mpc

from .contfrac import (DEFAULT_PREC, AlphaLike, ApproximantTable, alpha_value,
                       fibonacci, RangeError)
from .conformal import bcurve_f, douady_constant, moving_range_q


# ---------------------------------------------------------------------------
# good indices


@dataclass(frozen=True)
class GoodIndexSet:
    """Indices n >= 1 with q_{n+1} > 2 q_n^2, decided in integer arithmetic."""

    indices: tuple[int, ...]
    depth: int

    def __contains__(self, n: int) -> bool:
        return n in self.indices

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


def good_indices(table: ApproximantTable, N: int) -> GoodIndexSet:
    if N + 1 > table.depth:
        raise RangeError(f"need rows to {N + 1}, table depth is {table.depth}")
    idx = tuple(n for n in range(1, N + 1)
                if table.q(n + 1) > 2 * table.q(n) ** 2)
    return GoodIndexSet(idx, N)


# ---------------------------------------------------------------------------
# the disk ladder


@dataclass(frozen=True)
class LadderLevel:
    i: int                  # 1-based level number
    n: int                  # the good index n_i
    center: Fraction        # p_{n_i}/q_{n_i}
    radius_B: Fraction      # 1/q^3
    radius_D: Fraction      # 1/q^2
    radius_U: mpf           # (1/q^3)^(1/q)
    roots: tuple            # the q distinct q-th roots of alpha0 - p/q

    @property
    def q(self) -> int:
        return self.center.denominator

    def to_dict(self):
        return {
            "n_i": self.n,
            "p": self.center.numerator,
            "q": self.q,
            "rB": str(self.radius_B),
            "rD": str(self.radius_D),
            "rU": mp.nstr(self.radius_U, 25),
            "S": [[mp.nstr(mp.re(d), 25), mp.nstr(mp.im(d), 25)]
                  for d in self.roots],
        }


@dataclass(frozen=True)
class DiskLadder:
    alpha0: object
    levels: tuple[LadderLevel, ...]

    def __len__(self):
        return len(self.levels)

    def to_json(self) -> str:
        return json.dumps({"levels": [lv.to_dict() for lv in self.levels]},
                          indent=2)


def build_ladder(alpha0: AlphaLike, table: ApproximantTable,
                 good: GoodIndexSet, prec: int = DEFAULT_PREC) -> DiskLadder:
    """Nested-disk data at every good index, with the q-th-root fan of
    alpha0 - p/q computed at working precision."""
    with mp.workprec(prec):
        a0 = alpha_value(alpha0, prec)
        if not 0 < a0 < mpf(1) / 2:
            raise ValueError("alpha0 must lie in (0, 1/2)")
        levels = []
        for i, n in enumerate(good, start=1):
            p, q = table.p(n), table.q(n)
            center = Fraction(p, q)
            gap = a0 - mpf(p) / q
            base = mpc(gap) ** (mpf(1) / q)
            roots = tuple(+(base * mp.e ** (2j * mp.pi * k / q))
                          for k in range(q))
            levels.append(LadderLevel(
                i, n, center, Fraction(1, q ** 3), Fraction(1, q ** 2),
                +(mpf(1) / q ** 3) ** (mpf(1) / q), roots))
    return DiskLadder(alpha0, tuple(levels))


@dataclass(frozen=True)
class NestingReport:
    checks: tuple  # (name, ok, slack) triples

    @property
    def ok(self) -> bool:
        return all(c[1] for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c[1]]

    def to_dict(self):
        return {"ok": self.ok,
                "checks": [{"name": n, "ok": o, "slack": str(s)}
                           for n, o, s in self.checks]}


def _curve_clearance(center: Fraction, prec: int, grid: int = 4000) -> mpf:
    """Distance from the real point `center` to the multiplier-one curve
    (graph of bcurve_f below the real axis, hung off each integer)."""
    with mp.workprec(prec):
        c = mpf(center.numerator) / center.denominator
        best = mpf("inf")
        for k in (int(mp.floor(c)), int(mp.ceil(c))):
            for j in range(-grid + 1, grid):
                x = k + mpf(j) / (4 * grid)  # spans (k - 1/4, k + 1/4)
                y = bcurve_f(x - k, prec)
                best = min(best, mp.sqrt((x - c) ** 2 + y * y))
            best = min(best, abs(c - k))  # the curve meets the axis at k
        return +best


def verify_nesting(ladder: DiskLadder, alpha0: AlphaLike,
                   prec: int = DEFAULT_PREC) -> NestingReport:
    """Checks: alpha0 in every B_i; D_1 clears the multiplier-one curve by
    the 1/q^2 bound; B_{i+1} subset D_{i+1} subset punctured B_i (exact
    rational disk arithmetic); and the distance from alpha0 to successive
    centers at least halves."""
    if not ladder.levels:
        raise ValueError("ladder has no levels")
    checks = []
    with mp.workprec(prec):
        a0 = alpha_value(alpha0, prec)
        for lv in ladder.levels:
            gap = abs(a0 - mpf(lv.center.numerator) / lv.q)
            rB = mpf(lv.radius_B.numerator) / lv.radius_B.denominator
            checks.append((f"alpha0-in-B_{lv.i}", gap < rB, rB - gap))
        first = ladder.levels[0]
        clearance = _curve_clearance(first.center, prec)
        rD = mpf(first.radius_D.numerator) / first.radius_D.denominator
        checks.append(("D_1-clears-curve", clearance >= rD * (1 - mpf("1e-6")),
                       clearance - rD))
        for prev, cur in zip(ladder.levels, ladder.levels[1:]):
            checks.append((f"B_{cur.i}-in-D_{cur.i}",
                           cur.radius_B <= cur.radius_D,
                           cur.radius_D - cur.radius_B))
            dist = abs(cur.center - prev.center)  # exact rational
            checks.append((f"D_{cur.i}-in-B_{prev.i}",
                           dist + cur.radius_D <= prev.radius_B,
                           prev.radius_B - dist - cur.radius_D))
            checks.append((f"D_{cur.i}-avoids-center_{prev.i}",
                           dist - cur.radius_D > 0, dist - cur.radius_D))
            g_prev = abs(a0 - mpf(prev.center.numerator) / prev.q)
            g_cur = abs(a0 - mpf(cur.center.numerator) / cur.q)
            checks.append((f"halving_{prev.i}->{cur.i}",
                           g_cur < g_prev / 2, g_prev / 2 - g_cur))
    return NestingReport(tuple(checks))


# ---------------------------------------------------------------------------
# sum splitting


@dataclass(frozen=True)
class SumSplit:
    good_terms: mpf   # sum over good n <= N of log(q_{n+1})/q_n
    bad_bound: mpf    # sum over bad n in [1, N] of log(2 F_n^2)/F_n
    full_sum: mpf     # sum over n = 1..N of log(q_{n+1})/q_n
    slack: mpf        # good_terms + bad_bound - full_sum

    @property
    def strict(self) -> bool:
        return self.slack > 0

    def to_dict(self):
        return {"good_terms": mp.nstr(self.good_terms, 25),
                "bad_bound": mp.nstr(self.bad_bound, 25),
                "full_sum": mp.nstr(self.full_sum, 25),
                "slack": mp.nstr(self.slack, 25),
                "strict": self.strict}


def split_sum(table: ApproximantTable, N: int, good: GoodIndexSet,
              prec: int = DEFAULT_PREC) -> SumSplit:
    """Split the partial Bruno sum over n = 1..N into its good terms and
    the Fibonacci bound on the bad ones."""
    if N + 1 > table.depth:
        raise RangeError(f"need rows to {N + 1}, table depth is {table.depth}")
    with mp.workprec(prec):
        full = mp.fsum(mp.log(table.q(n + 1)) / table.q(n)
                       for n in range(1, N + 1))
        goods = mp.fsum(mp.log(table.q(n + 1)) / table.q(n)
                        for n in good if n <= N)
        bads = mp.fsum(mp.log(2 * fibonacci(n) ** 2) / fibonacci(n)
                       for n in range(1, N + 1) if n not in good)
        return SumSplit(+goods, +bads, +full, +(goods + bads - full))


# ---------------------------------------------------------------------------
# the per-level main-estimate terms and the global budget


def main_estimate_terms(table: ApproximantTable, n: int,
                        prec: int = DEFAULT_PREC) -> tuple[mpf, mpf, mpf]:
    """The three addends bounding the per-level loss of log conformal
    radius: (-log(q_{1+n})/q_n, log(24 F_n^2)/F_n, log(16)/(1 + F_n/1.5))."""
    with mp.workprec(prec):
        qn, qn1 = table.q(n), table.q(n + 1)
        F = fibonacci(n)
        t1 = -mp.log(qn1) / qn
        t2 = mp.log(24 * F * F) / F
        t3 = mp.log(16) / (1 + F / mpf("1.5"))
        return +t1, +t2, +t3


def main_estimate_terms_q(table: ApproximantTable, n: int,
                          prec: int = DEFAULT_PREC) -> tuple[mpf, mpf, mpf]:
    """Same terms with the actual denominator q_n in place of the Fibonacci
    lower bound; by the monotonicity lemma these are no larger."""
    with mp.workprec(prec):
        qn, qn1 = table.q(n), table.q(n + 1)
        t1 = -mp.log(qn1) / qn
        t2 = mp.log(24 * qn * qn) / qn
        t3 = mp.log(16) / (1 + qn / mpf("1.5"))
        return +t1, +t2, +t3


def decomposition_ok(table: ApproximantTable, n: int,
                     prec: int = DEFAULT_PREC) -> bool:
    """Check the slit-map decomposition behind the second addend:
    2 log(q)/q + C/q <= log(24 q^2)/q, i.e. C <= log 24."""
    with mp.workprec(prec):
        q = table.q(n)
        lhs = 2 * mp.log(q) / q + douady_constant(prec) / q
        rhs = mp.log(24 * q * q) / q
        return lhs <= rhs


@dataclass(frozen=True)
class ConstantAudit:
    terms: tuple            # (n, F_n, slit term, moving-range term)
    partial: mpf            # sum of listed terms
    tail: mpf               # rigorous bound on the omitted tail
    log8pi: mpf
    total: mpf
    target: float = 16.0

    @property
    def ok(self) -> bool:
        return self.total < self.target

    @property
    def margin(self) -> mpf:
        return self.target - self.total

    def to_dict(self):
        return {
            "terms": [{"n": n, "F": F, "slit": mp.nstr(a, 20),
                       "moving_range": mp.nstr(b, 20)}
                      for n, F, a, b in self.terms],
            "tail": mp.nstr(self.tail, 20),
            "log8pi": mp.nstr(self.log8pi, 20),
            "total": mp.nstr(self.total, 20),
            "target": self.target,
            "margin": mp.nstr(self.margin, 20),
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def constant_audit(n_max: int = 60, tail_policy: str = "golden",
                   prec: int = DEFAULT_PREC) -> ConstantAudit:
    """Global budget: log(8 pi) + sum over n >= 1 of
    log(24 F_n^2)/F_n + log(16)/(1 + F_n/1.5), with a rigorous tail.

    Both omitted terms are bounded by (log 24 + 1.5 log 16 + 2 log F)/F,
    decreasing in F.  Policy "golden" then uses F_n >= phi^(n-1); policy
    "two-step-doubling" uses F_{n_max+j} >= F_{n_max} sqrt(2)^j."""
    if n_max < 10:
        raise ValueError("n_max must be >= 10")
    if tail_policy not in ("golden", "two-step-doubling"):
        raise ValueError(f"unknown tail policy {tail_policy!r}")
    with mp.workprec(prec):
        terms = []
        for n in range(1, n_max + 1):
            F = fibonacci(n)
            slit = mp.log(24 * F * F) / F
            mrange = mp.log(16) / (1 + F / mpf("1.5"))
            terms.append((n, F, +slit, +mrange))
        partial = mp.fsum(t[2] + t[3] for t in terms)
        K = mp.log(24) + mpf("1.5") * mp.log(16)
        if tail_policy == "golden":
            phi = (1 + mp.sqrt(5)) / 2
            x = 1 / phi
            M = n_max  # tail indices n > n_max, exponents m = n - 1 >= M
            geo = x ** M / (1 - x)                       # sum_{m>=M} x^m
            ageo = x ** M * (M * (1 - x) + x) / (1 - x) ** 2  # sum m x^m
            tail = K * geo + 2 * mp.log(phi) * ageo
        else:
            F0 = mpf(fibonacci(n_max))
            rho = mp.sqrt(2)
            x = 1 / rho
            geo = x / (1 - x)             # sum_{j>=1} x^j
            ageo = x / (1 - x) ** 2       # sum_{j>=1} j x^j
            tail = ((K + 2 * mp.log(F0)) * geo + 2 * mp.log(rho) * ageo) / F0
        log8pi = mp.log(8 * mp.pi)
        total = log8pi + partial + tail
        return ConstantAudit(tuple(terms), +partial, +tail, +log8pi, +total)

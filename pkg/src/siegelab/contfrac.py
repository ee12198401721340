"""Continued fractions, approximants and Bruno partial sums at arbitrary precision.

Conventions: digits are [a0; a1, a2, ...] with every a_n >= 1 for n >= 1,
denominators follow q_n = a_n q_{n-1} + q_{n-2} seeded with q_{-1} = 0,
q_{-2} = 1 (so q_0 = 1 always), and the Bruno partial sum B_N includes the
n = 0 term log(q_1)/q_0.  Some texts drop that term; we keep it.

Fibonacci numbers use the shifted indexing F_0 = 1, F_1 = 2, which
lower-bounds q_n for alpha in (0, 1/2).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

from mpmath import mp, mpf

DEFAULT_PREC = 256

GOLDEN_RATIO_BITS = None  # no module state; precision is always passed explicitly


class RangeError(IndexError):
    """Requested index beyond the available digits or table rows."""


class RationalAlphaError(ValueError):
    """An irrational rotation number was required but a rational was supplied."""


# ---------------------------------------------------------------------------
# quadratic irrationals (a + b*sqrt(d))/c, used for exact periodic expansions


@dataclass(frozen=True)
class QuadraticIrrational:
    """Exact representation of (a + b*sqrt(d))/c with integer a, b, c and
    d a positive non-square."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.c == 0:
            raise ValueError("zero denominator")
        if self.d <= 0 or math.isqrt(self.d) ** 2 == self.d:
            raise ValueError("d must be a positive non-square")
        if self.b == 0:
            raise ValueError("b = 0 is a rational; use Fraction instead")

    def value(self, prec: int = DEFAULT_PREC) -> mpf:
        with mp.workprec(prec + 16):
            v = (self.a + self.b * mp.sqrt(self.d)) / self.c
        return +v

    def __str__(self):
        sign = "+" if self.b >= 0 else "-"
        return f"({self.a}{sign}{abs(self.b)}*sqrt({self.d}))/{self.c}"


def _floor_quadratic(P: int, D: int, Q: int) -> int:
    """Exact floor((P + sqrt(D))/Q) for non-square D > 0."""
    r = math.isqrt(D)
    # sqrt(D) is irrational, so floor(P + sqrt(D)) = P + r exactly
    if Q > 0:
        return (P + r) // Q
    return (-P - r - 1) // (-Q)


# ---------------------------------------------------------------------------
# continued fractions


@dataclass(frozen=True)
class ContinuedFraction:
    """Digits of a continued fraction, possibly with a repeating tail.

    ``pre`` holds the aperiodic digits a1.. and ``rep`` the repetend (empty
    when there is none).  ``exact`` is True when the digits represent the
    input exactly: a terminated rational expansion or a periodic one.  A
    truncated expansion of a decimal input has ``exact = False``; digits
    beyond the precision horizon are never fabricated.
    """

    a0: int
    pre: tuple[int, ...]
    rep: tuple[int, ...] = ()
    exact: bool = True

    def __post_init__(self):
        for a in self.pre + self.rep:
            if a < 1:
                raise ValueError("partial quotients must be >= 1")

    @property
    def periodic(self) -> bool:
        return bool(self.rep)

    @property
    def rational(self) -> bool:
        return self.exact and not self.rep

    def num_digits(self) -> float:
        """Number of available digits a1.., math.inf when periodic."""
        return math.inf if self.rep else len(self.pre)

    def digit(self, n: int) -> int:
        """Partial quotient a_n, n >= 1."""
        if n < 1:
            raise RangeError("digit index must be >= 1")
        if n <= len(self.pre):
            return self.pre[n - 1]
        if not self.rep:
            raise RangeError(f"digit a_{n} not available (only {len(self.pre)})")
        return self.rep[(n - 1 - len(self.pre)) % len(self.rep)]

    def digits(self, N: int) -> tuple[int, ...]:
        return tuple(self.digit(n) for n in range(1, N + 1))

    def to_fraction(self) -> Fraction:
        if not self.rational:
            raise ValueError("not a terminated rational expansion")
        x = Fraction(0)
        for a in reversed(self.pre):
            x = 1 / (a + x)
        return self.a0 + x

    def to_quadratic(self) -> QuadraticIrrational:
        """Exact quadratic irrational represented by a periodic expansion."""
        if not self.rep:
            raise ValueError("expansion has no repetend")
        # y = value of the purely periodic tail: y = (Ay + B)/(Cy + D)
        A, B, C, D = 1, 0, 0, 1
        for a in self.rep:
            A, B, C, D = A * a + B, A, C * a + D, C
        # C y^2 + (D - A) y - B = 0, take the root > 1
        disc = (A - D) ** 2 + 4 * B * C
        # x = a0 + prefix continued fraction closed by y
        P11, P12, P21, P22 = self.a0, 1, 1, 0
        for a in self.pre:
            P11, P12, P21, P22 = P11 * a + P12, P11, P21 * a + P22, P21
        # y = (g + sqrt(disc)) / h
        g, h = A - D, 2 * C
        # x = (P11*(g + s) + P12*h) / (P21*(g + s) + P22*h), s = sqrt(disc)
        na, nb = P11 * g + P12 * h, P11
        da, db = P21 * g + P22 * h, P21
        # rationalize: multiply by conjugate of denominator
        denom = da * da - db * db * disc
        xa = na * da - nb * db * disc
        xb = nb * da - na * db
        gg = math.gcd(math.gcd(abs(xa), abs(xb)), abs(denom))
        if denom < 0:
            gg = -gg
        return QuadraticIrrational(xa // gg, xb // gg, denom // gg, disc)

    def value(self, prec: int = DEFAULT_PREC) -> mpf:
        if self.rep:
            return self.to_quadratic().value(prec)
        if self.rational:
            f = self.to_fraction()
            with mp.workprec(prec):
                return mpf(f.numerator) / f.denominator
        # truncated: evaluate the deepest available convergent
        t = approximants(self, len(self.pre))
        with mp.workprec(prec):
            return mpf(t.p(len(self.pre))) / t.q(len(self.pre))

    def __str__(self):
        parts = ",".join(str(a) for a in self.pre)
        if self.rep:
            repstr = "(" + ",".join(str(a) for a in self.rep) + ")"
            parts = parts + "," + repstr if parts else repstr
        return f"[{self.a0}; {parts}]" if parts else f"[{self.a0}]"


_CF_LITERAL = re.compile(
    r"^\s*\[\s*(-?\d+)\s*(?:;\s*(.*?))?\s*\]\s*$"
)


def parse_cf_literal(text: str) -> ContinuedFraction:
    """Parse "[a0; a1,a2,(r1,r2)]"; the parenthesised block is the repetend."""
    m = _CF_LITERAL.match(text)
    if not m:
        raise ValueError(f"not a continued-fraction literal: {text!r}")
    a0 = int(m.group(1))
    rest = (m.group(2) or "").strip()
    if not rest:
        return ContinuedFraction(a0, (), (), True)
    rm = re.match(r"^(.*?)\(\s*([\d\s,]+)\s*\)\s*$", rest)
    if rm:
        prestr, repstr = rm.group(1).strip().rstrip(","), rm.group(2)
        rep = tuple(int(t) for t in repstr.split(",") if t.strip())
        pre = tuple(int(t) for t in prestr.split(",") if t.strip()) if prestr else ()
        if not rep:
            raise ValueError("empty repetend")
        return ContinuedFraction(a0, pre, rep, True)
    pre = tuple(int(t) for t in rest.split(",") if t.strip())
    return ContinuedFraction(a0, pre, (), True)


def _expand_fraction(x: Fraction, max_terms: int) -> ContinuedFraction:
    a0 = x.numerator // x.denominator
    digits = []
    p, q = x.numerator - a0 * x.denominator, x.denominator
    while p != 0 and len(digits) < max_terms:
        a, r = divmod(q, p)
        digits.append(a)
        p, q = r, p
    exact = p == 0
    if exact and len(digits) > 1 and digits[-1] == 1:
        # canonical form: fold a trailing 1 into the previous digit
        digits.pop()
        digits[-1] += 1
    return ContinuedFraction(a0, tuple(digits), (), exact)


def _expand_quadratic(x: QuadraticIrrational, max_terms: int) -> ContinuedFraction:
    # canonical (P + sqrt(D))/Q with Q | (D - P^2)
    s = 1 if x.b > 0 else -1
    D = x.d * x.b * x.b
    P, Q = x.a * s, x.c * s
    if (D - P * P) % Q != 0:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    digits = []
    seen: dict[tuple[int, int], int] = {}
    a0 = _floor_quadratic(P, D, Q)
    P = a0 * Q - P
    Q = (D - P * P) // Q
    while len(digits) < max_terms:
        if (P, Q) in seen:
            k = seen[(P, Q)]
            return ContinuedFraction(a0, tuple(digits[:k]),
                                     tuple(digits[k:]), True)
        seen[(P, Q)] = len(digits)
        a = _floor_quadratic(P, D, Q)
        digits.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    return ContinuedFraction(a0, tuple(digits), (), False)


def _expand_real(x, max_terms: int, prec: int) -> ContinuedFraction:
    cutoff = mpf(2) ** (-(prec // 2))
    with mp.workprec(prec):
        y = mpf(x)
        a0 = int(mp.floor(y))
        y -= a0
        digits = []
        while len(digits) < max_terms:
            if y < cutoff:
                # residual indistinguishable from 0: terminate, report exact
                if len(digits) > 1 and digits[-1] == 1:
                    digits.pop()
                    digits[-1] += 1
                return ContinuedFraction(a0, tuple(digits), (), True)
            y = 1 / y
            a = int(mp.floor(y))
            digits.append(a)
            y -= a
    return ContinuedFraction(a0, tuple(digits), (), False)


AlphaLike = Union[ContinuedFraction, QuadraticIrrational, Fraction, int, float, mpf]


def cf_expand(x: AlphaLike, max_terms: int = 64,
              prec: int = DEFAULT_PREC) -> ContinuedFraction:
    """Continued-fraction expansion of x.

    Rational and quadratic inputs expand exactly (terminating or periodic);
    real inputs stop when the residual drops below 2^(-prec/2) and mark the
    expansion truncated rather than emit unreliable digits.
    """
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    if isinstance(x, ContinuedFraction):
        return x
    if isinstance(x, QuadraticIrrational):
        return _expand_quadratic(x, max_terms)
    if isinstance(x, (int, Fraction)):
        return _expand_fraction(Fraction(x), max_terms)
    return _expand_real(x, max_terms, prec)


def alpha_value(x: AlphaLike, prec: int = DEFAULT_PREC) -> mpf:
    """High-precision value of any accepted rotation-number representation."""
    if isinstance(x, ContinuedFraction):
        return x.value(prec)
    if isinstance(x, QuadraticIrrational):
        return x.value(prec)
    with mp.workprec(prec):
        if isinstance(x, Fraction):
            return mpf(x.numerator) / x.denominator
        return +mpf(x)


# ---------------------------------------------------------------------------
# alpha command-line / fixture parsing

_QUAD_RE = re.compile(
    r"""^\s*\(\s*(-?\d+)\s*([+-])\s*(?:(\d+)\s*\*?\s*)?
        (?:sqrt\(\s*(\d+)\s*\)|√\s*(\d+))\s*\)\s*/\s*(-?\d+)\s*$""",
    re.VERBOSE,
)


def parse_alpha(text: str):
    """Parse an alpha specification.

    Accepted forms: a continued-fraction literal "[0; 2,(1)]", a quadratic
    surd "(3-sqrt(5))/2" (also with the √ glyph), a fraction "3/10", or a
    decimal "0.3" (read exactly as a rational).
    """
    text = text.strip()
    if text.startswith("["):
        return parse_cf_literal(text)
    m = _QUAD_RE.match(text)
    if m:
        a = int(m.group(1))
        sign = -1 if m.group(2) == "-" else 1
        coeff = int(m.group(3)) if m.group(3) else 1
        d = int(m.group(4) or m.group(5))
        c = int(m.group(6))
        return QuadraticIrrational(a, sign * coeff, c, d)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse alpha specification: {text!r}")


# ---------------------------------------------------------------------------
# approximants


@dataclass(frozen=True)
class ApproximantTable:
    """Rows (n, p_n, q_n) for n = 0..N, satisfying the standard recurrence."""

    rows: tuple[tuple[int, int, int], ...]

    def __len__(self):
        return len(self.rows)

    @property
    def depth(self) -> int:
        return len(self.rows) - 1

    def _row(self, n: int):
        if n < 0 or n >= len(self.rows):
            raise RangeError(f"row {n} not in table (depth {self.depth})")
        return self.rows[n]

    def p(self, n: int) -> int:
        return self._row(n)[1]

    def q(self, n: int) -> int:
        return self._row(n)[2]

    def convergent(self, n: int) -> Fraction:
        _, p, q = self._row(n)
        return Fraction(p, q)


def approximants(cf: ContinuedFraction, N: int) -> ApproximantTable:
    """Table of convergents p_n/q_n for n = 0..N."""
    if N > cf.num_digits():
        raise RangeError(f"need digit a_{N}, only {len(cf.pre)} available")
    p2, p1 = 0, 1  # p_{-2}, p_{-1}
    q2, q1 = 1, 0  # q_{-2}, q_{-1}
    rows = []
    for n in range(N + 1):
        a = cf.a0 if n == 0 else cf.digit(n)
        p = a * p1 + p2
        q = a * q1 + q2
        rows.append((n, p, q))
        p2, p1 = p1, p
        q2, q1 = q1, q
    return ApproximantTable(tuple(rows))


def gap_bounds(table: ApproximantTable, n: int) -> tuple[Fraction, Fraction]:
    """Classical sandwich 1/(2 q_n q_{n+1}) < |alpha - p_n/q_n| < 1/(q_n q_{n+1})."""
    qn, qn1 = table.q(n), table.q(n + 1)
    return Fraction(1, 2 * qn * qn1), Fraction(1, qn * qn1)


def gap_sandwich_ok(alpha: AlphaLike, table: ApproximantTable, n: int,
                    prec: int = DEFAULT_PREC) -> bool:
    """Companion check: the computed |alpha - p_n/q_n| lies strictly between
    the two bounds."""
    lo, hi = gap_bounds(table, n)
    with mp.workprec(prec):
        a = alpha_value(alpha, prec)
        gap = abs(a - mpf(table.p(n)) / table.q(n))
        return mpf(lo.numerator) / lo.denominator < gap < mpf(hi.numerator) / hi.denominator


# ---------------------------------------------------------------------------
# Bruno partial sums


@dataclass(frozen=True)
class BrunoEvaluation:
    """Terms log(q_{n+1})/q_n for n = 0..depth and their sum."""

    terms: tuple[mpf, ...]
    partial: mpf
    depth: int

    def to_dict(self):
        return {
            "depth": self.depth,
            "terms": [mp.nstr(t, 30) for t in self.terms],
            "partial": mp.nstr(self.partial, 30),
        }


def bruno_partial(table: ApproximantTable, N: int,
                  prec: int = DEFAULT_PREC) -> BrunoEvaluation:
    """B_N = sum_{n=0}^{N} log(q_{n+1})/q_n (the n = 0 term is included)."""
    if N + 1 > table.depth:
        raise RangeError(f"need rows to {N + 1}, table depth is {table.depth}")
    with mp.workprec(prec):
        terms = tuple(mp.log(table.q(n + 1)) / table.q(n) for n in range(N + 1))
        partial = +mp.fsum(terms)
    return BrunoEvaluation(terms, partial, N)


# ---------------------------------------------------------------------------
# Fibonacci bounds and the appendix sums

_FIB_CACHE = [1, 2]


def fibonacci(n: int) -> int:
    """F_0 = 1, F_1 = 2, F_{n+1} = F_n + F_{n-1} (shifted indexing)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    while len(_FIB_CACHE) <= n:
        _FIB_CACHE.append(_FIB_CACHE[-1] + _FIB_CACHE[-2])
    return _FIB_CACHE[n]


class AppendixConstants(NamedTuple):
    s1: mpf      # partial sum of log(F_n)/F_n, n = 1..n_max
    s2: mpf      # partial sum of 1/F_n, n = 1..n_max
    tail1: mpf   # rigorous bound on the omitted tail of s1
    tail2: mpf   # rigorous bound on the omitted tail of s2


def appendix_constants(n_max: int, prec: int = DEFAULT_PREC) -> AppendixConstants:
    """Partial sums of log(F_n)/F_n and 1/F_n with geometric tail bounds.

    Tails use F_n >= phi^(n-1) together with F_n <= 2^n, giving
    sum_{n>M} 1/F_n <= phi^(1-M) * phi/(phi-1) and
    sum_{n>M} log(F_n)/F_n <= log(2) * sum_{n>M} n phi^(1-n).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    with mp.workprec(prec):
        s1 = mp.fsum(mp.log(fibonacci(n)) / fibonacci(n) for n in range(1, n_max + 1))
        s2 = mp.fsum(mpf(1) / fibonacci(n) for n in range(1, n_max + 1))
        phi = (1 + mp.sqrt(5)) / 2
        x = 1 / phi
        M = n_max
        # sum_{n=M+1}^inf x^(n-1) = x^M / (1 - x)
        tail2 = x ** M / (1 - x)
        # sum_{n=M+1}^inf n x^(n-1) = ((M+1) x^M (1-x) + x^(M+1)) / (1-x)^2
        tail1 = mp.log(2) * (((M + 1) * x ** M) * (1 - x) + x ** (M + 1)) / (1 - x) ** 2
        return AppendixConstants(+s1, +s2, +tail1, +tail2)


@dataclass(frozen=True)
class MonotoneScanReport:
    """Result of scanning log(lambda n^2)/n for monotone decrease."""

    lam: float
    n_max: int
    decreasing: bool
    first_violation: int | None  # smallest n with term(n) < term(n+1)

    @property
    def ok(self) -> bool:
        return self.decreasing


def dull_lemma_check(lam, n_max: int, prec: int = DEFAULT_PREC) -> MonotoneScanReport:
    """Scan n = 2..n_max and verify log(lam * n^2)/n is strictly decreasing.

    Holds for lam > 81/64; a violation for smaller lam is reported as data.
    """
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    with mp.workprec(prec):
        lamv = mpf(lam)
        prev = mp.log(lamv * 4) / 2
        for n in range(3, n_max + 1):
            cur = mp.log(lamv * n * n) / n
            if not cur < prev:
                return MonotoneScanReport(float(lam), n_max, False, n - 1)
            prev = cur
    return MonotoneScanReport(float(lam), n_max, True, None)

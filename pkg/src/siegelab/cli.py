"""Batch command line front end.

Subcommands expose the computational surface: `cf` (approximant tables),
`bruno` (partial sums of the small-divisor series), `audit` (the global
inequality scans), `explode` (cycle tracking near a parabolic parameter),
`radius` (the headline B + log r report).

Exit codes: 0 every check holds, 1 a checked inequality failed, 2 usage or
parse error, 3 numerical failure (divergence, small divisors, precision).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from mpmath import mp, mpf

from . import conformal, explosion, ladder, siegel
from .contfrac import (approximants, appendix_constants, bruno_partial,
                       cf_expand, dull_lemma_check, gap_bounds, parse_alpha)
from .explosion import (CollisionWithZero, NewtonDivergence, PrecisionFailure,
                        estimate_R, radial_path, track_chi,
                        verify_cycle_relation)
from .siegel import SmallDivisorError, theorem_check

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


@dataclass
class RunConfig:
    precision_bits: int = 256
    series_N: int = 4000
    cf_depth: int = 64
    tolerance: float = 1e-12
    fmt: str = "text"  # json | csv | text
    seed: int = 0

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        if self.series_N < 100:
            raise ValueError("series_N must be >= 100")
        if self.fmt not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.fmt!r}")


# ---------------------------------------------------------------------------
# cf


def cmd_cf(cfg: RunConfig, args) -> int:
    alpha = parse_alpha(args.alpha)
    cf = cf_expand(alpha, args.depth + 2, cfg.precision_bits)
    limit = args.depth
    if cf.num_digits() != float("inf"):
        limit = min(limit, int(cf.num_digits()))
    table = approximants(cf, limit)
    rows = []
    for n in range(limit + 1):
        lo, hi = (gap_bounds(table, n) if n + 1 <= table.depth else (None, None))
        rows.append({"n": n, "p": table.p(n), "q": table.q(n),
                     "gap_lo": None if lo is None else str(lo),
                     "gap_hi": None if hi is None else str(hi)})
    out = {"alpha": args.alpha, "digits": list(cf.digits(limit)),
           "rational": cf.rational, "rows": rows}
    if cf.rational:
        out["note"] = "input is an exact rational; expansion terminates"
    if cfg.fmt == "json":
        print(json.dumps(out, indent=2))
    elif cfg.fmt == "csv":
        print("n,p,q,gap_lo,gap_hi")
        for r in rows:
            print(f"{r['n']},{r['p']},{r['q']},{r['gap_lo']},{r['gap_hi']}")
    else:
        if cf.rational:
            print("exact rational input; expansion terminates")
        print(f"digits: {out['digits']}")
        print(f"{'n':>4} {'p':>16} {'q':>16}  gap interval (exact)")
        for r in rows:
            print(f"{r['n']:>4} {r['p']:>16} {r['q']:>16}  "
                  f"({r['gap_lo']}, {r['gap_hi']})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# bruno


def cmd_bruno(cfg: RunConfig, args) -> int:
    alpha = parse_alpha(args.alpha)
    cf = cf_expand(alpha, args.depth + 2, cfg.precision_bits)
    if cf.rational:
        print("alpha is rational; the small-divisor sum diverges",
              file=sys.stderr)
        return EXIT_USAGE
    depth = args.depth
    if cf.num_digits() != float("inf"):
        depth = min(depth, int(cf.num_digits()) - 1)
    table = approximants(cf, depth + 1)
    ev = bruno_partial(table, depth, cfg.precision_bits)
    print(json.dumps(ev.to_dict(), indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------------
# audit


def _audit_constants(cfg: RunConfig) -> list:
    checks = []
    ac = appendix_constants(80, cfg.precision_bits)
    s1_hi = ac.s1 + ac.tail1
    s2_hi = ac.s2 + ac.tail2
    checks.append(("constants.fib-log-series",
                   mpf("1.96") <= ac.s1 and s1_hi < mpf("1.97"),
                   f"sum in [{mp.nstr(ac.s1, 8)}, {mp.nstr(s1_hi, 8)}]"))
    checks.append(("constants.fib-reciprocal-series",
                   mpf("1.35") <= ac.s2 and s2_hi < mpf("1.36"),
                   f"sum in [{mp.nstr(ac.s2, 8)}, {mp.nstr(s2_hi, 8)}]"))
    ca = ladder.constant_audit(60, prec=cfg.precision_bits)
    checks.append(("constants.budget-below-16", ca.ok,
                   f"total={mp.nstr(ca.total, 10)} margin={mp.nstr(ca.margin, 6)}"))
    dull = dull_lemma_check(24, 10000, cfg.precision_bits)
    checks.append(("constants.monotone-term-lemma", dull.ok,
                   "log(24 n^2)/n strictly decreasing to n=10^4"))
    return checks


def _audit_key_inequality(cfg: RunConfig, qmax: int) -> list:
    rep = explosion.key_inequality_audit(qmax)
    return [("key-inequality.yoccoz-scan", rep.ok,
             f"qmax={qmax} min_margin={rep.min_margin:.3e} at {rep.argmin}")]


def _audit_bcurve(cfg: RunConfig, grid: int) -> list:
    rep = conformal.bcurve_audit(grid, cfg.precision_bits)
    return [("bcurve.negativity-and-trig", rep.ok,
             f"grid={grid} violations={rep.violations} "
             f"min_slack_g={rep.min_slack_g:.3e}")]


def _audit_slit(cfg: RunConfig) -> list:
    checks = []
    prec = cfg.precision_bits
    with mp.workprec(prec):
        h = mpf(2) ** (-(prec * 2 // 3))
        worst = mpf(0)
        for q in range(1, 65):
            d0 = conformal.phi_q(h, q, prec) / h
            worst = max(worst, abs(d0 - mpf(4) ** (mpf(1) / q)))
        checks.append(("slit.derivative-at-zero", worst < mpf("1e-12"),
                       f"max |phi_q'(0) - 4^(1/q)| = {mp.nstr(worst, 4)}"))
        r2 = abs(conformal.rho_q(2, prec) - (mp.sqrt(2) - 1))
        checks.append(("slit.rho2-closed-form", r2 < mpf("1e-12"),
                       f"|rho_2 - (sqrt(2)-1)| = {mp.nstr(r2, 4)}"))
        C = conformal.douady_constant(prec)
        checks.append(("slit.constant-below-log24", C < mp.log(24),
                       f"C={mp.nstr(C, 8)} log24={mp.nstr(mp.log(24), 8)}"))
        ok = all(conformal.chord_bound_ok(mpf(1) / (3 * q), prec)
                 for q in range(2, 65))
        checks.append(("slit.convexity-chord", ok, "q=2..64"))
    return checks


def _audit_schwarz(cfg: RunConfig) -> list:
    import random
    rng = random.Random(cfg.seed)
    checks = []
    tol = mpf(cfg.tolerance)
    for k in (1, 2, 3):
        a = 0.1 + 0.8 * rng.random()
        worst = conformal.relative_schwarz_check(k, a, 200, cfg.precision_bits)
        checks.append((f"schwarz.pullback-k{k}", worst <= tol,
                       f"puncture={a:.4f} max_violation={mp.nstr(worst, 4)}"))
    r14 = conformal.disk_minus_point_radius(0.25, cfg.precision_bits)
    r12 = conformal.disk_minus_point_radius(0.5, cfg.precision_bits)
    checks.append(("schwarz.radius-decay", r14 <= r12,
                   f"rad(D-1/4)={mp.nstr(r14, 8)} <= rad(D-1/2)={mp.nstr(r12, 8)}"))
    return checks


def cmd_audit(cfg: RunConfig, args) -> int:
    which = args.which
    checks = []
    if which in ("constants", "all"):
        checks += _audit_constants(cfg)
    if which in ("key-inequality", "all"):
        checks += _audit_key_inequality(cfg, args.qmax)
    if which in ("bcurve", "all"):
        checks += _audit_bcurve(cfg, args.grid)
    if which in ("slit", "all"):
        checks += _audit_slit(cfg)
    if which in ("schwarz", "all"):
        checks += _audit_schwarz(cfg)
    if args.inject_fault and checks:
        name, _, detail = checks[0]
        checks[0] = (name, False, detail + " [fault injected]")
    if cfg.fmt == "json":
        print(json.dumps({"checks": [{"name": n, "ok": o, "detail": d}
                                     for n, o, d in checks],
                          "ok": all(o for _, o, _ in checks)}, indent=2))
    else:
        for name, ok, detail in checks:
            print(f"{name}: {'OK' if ok else 'FAIL'} {detail}")
    return EXIT_OK if all(o for _, o, _ in checks) else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# explode


def cmd_explode(cfg: RunConfig, args) -> int:
    p, q = args.p, args.q
    if q < 2 or not 0 < p < q or gcd(p, q) != 1:
        print(f"p/q = {p}/{q} must be a reduced fraction in (0, 1) with q >= 2",
              file=sys.stderr)
        return EXIT_USAGE
    pq = Fraction(p, q)
    prec = cfg.precision_bits
    with mp.workprec(prec):
        guard = None
        if args.delta_path == "beyond-R":
            guard = estimate_R(pq, prec=prec).R
            target = (guard * mpf("1.2")) ** (mpf(1) / q)
        else:
            target = (mpf(1) / (2 * q ** 3)) ** (mpf(1) / q)
        branch = track_chi(pq, 0, radial_path(target), prec=prec,
                           guard_radius=guard)
        err = verify_cycle_relation(pq, target, prec=prec)
    if args.emit:
        branch.write_csv(args.emit)
        print(f"branch samples written to {args.emit}")
    print(f"cycle-relation: max |P(chi(delta)) - chi(zeta delta)| = "
          f"{mp.nstr(err, 6)} at |delta|^{q} = {mp.nstr(abs(target) ** q, 6)}")
    return EXIT_OK if err < mpf(cfg.tolerance) else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# radius


def cmd_radius(cfg: RunConfig, args) -> int:
    alpha = parse_alpha(args.alpha)
    report = theorem_check(alpha, depth_N=args.cf_depth,
                           series_N=args.series_N or cfg.series_N,
                           precision=cfg.precision_bits)
    print(report.to_json())
    return EXIT_OK if report.margin_vs_16 > 0 else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=256,
                        help="working precision in bits (>= 64)")
    common.add_argument("--format", choices=("json", "csv", "text"),
                        default="text", help="output format")
    common.add_argument("--tolerance", type=float, default=1e-12,
                        help="violation tolerance for audits")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized spot checks")

    ap = argparse.ArgumentParser(
        prog="siegelab",
        description="Numerical laboratory for quadratic Siegel disks: "
                    "continued fractions, parabolic explosion, conformal "
                    "radius bounds, and the B(alpha) + log r(alpha) budget.")
    sub = ap.add_subparsers(dest="command", required=True)

    p_cf = sub.add_parser("cf", parents=[common],
                          help="approximant table with exact gap bounds")
    p_cf.add_argument("--alpha", required=True,
                      help='decimal, CF literal "[a0;a1,(rep)]", or quadratic (a+b*sqrt(d))/c')
    p_cf.add_argument("--depth", type=int, default=10)

    p_br = sub.add_parser("bruno", parents=[common],
                          help="partial small-divisor sum as JSON")
    p_br.add_argument("--alpha", required=True)
    p_br.add_argument("--depth", type=int, default=40)

    p_au = sub.add_parser("audit", parents=[common],
                          help="inequality scans; exit 1 on violation")
    p_au.add_argument("--which", default="all",
                      choices=("constants", "key-inequality", "bcurve",
                               "slit", "schwarz", "all"))
    p_au.add_argument("--qmax", type=int, default=50)
    p_au.add_argument("--grid", type=int, default=10000)
    p_au.add_argument("--inject-fault", action="store_true",
                      help=argparse.SUPPRESS)

    p_ex = sub.add_parser("explode", parents=[common],
                          help="track a cycle branch; CSV columns "
                               "delta_re,delta_im,chi_re,chi_im,residual")
    p_ex.add_argument("--p", type=int, required=True)
    p_ex.add_argument("--q", type=int, required=True)
    p_ex.add_argument("--delta-path", default="inside",
                      choices=("inside", "beyond-R"))
    p_ex.add_argument("--emit", help="write branch samples to this CSV path")

    p_ra = sub.add_parser("radius", parents=[common],
                          help="B_partial + log r report as JSON")
    p_ra.add_argument("--alpha", required=True)
    p_ra.add_argument("--series-N", type=int, dest="series_N")
    p_ra.add_argument("--cf-depth", type=int, dest="cf_depth", default=64)

    return ap


_DISPATCH = {"cf": cmd_cf, "bruno": cmd_bruno, "audit": cmd_audit,
             "explode": cmd_explode, "radius": cmd_radius}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        cfg = RunConfig(precision_bits=args.precision, tolerance=args.tolerance,
                        fmt=args.format, seed=args.seed)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _DISPATCH[args.command](cfg, args)
    except (ValueError, KeyError, IndexError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SmallDivisorError, PrecisionFailure, NewtonDivergence,
            CollisionWithZero, ZeroDivisionError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())

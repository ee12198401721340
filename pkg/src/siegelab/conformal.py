"""Closed-form Poincare densities, conformal-radius calculus and the slit-map
and moving-range bound formulas, with numerical checks of the relative
Schwarz lemma on model domains.

Conventions: the unit-disk density is 2/(1-|z|^2), so rad(U) = 2/rho_U(0);
q-th roots always take the principal branch.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable

from mpmath import mp, mpf, mpc

from .contfrac import DEFAULT_PREC


class DomainError(ValueError):
    """Evaluation point outside the model domain (or at a puncture)."""


# ---------------------------------------------------------------------------
# density models


@dataclass(frozen=True)
class DensityModel:
    """A hyperbolic model domain with a closed-form Poincare density.

    kinds: unit-disk | punctured-disk | eps-punctured-disk(eps) | ball(rho)
    | disk-minus-point(a)
    """

    kind: str
    eps: float | None = None
    rho: float | None = None
    a: float | None = None

    def __post_init__(self):
        if self.kind not in ("unit-disk", "punctured-disk", "eps-punctured-disk",
                             "ball", "disk-minus-point"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == "eps-punctured-disk" and not (self.eps and 0 < self.eps < 1):
            raise ValueError("eps must lie in (0, 1)")
        if self.kind == "ball" and not (self.rho and self.rho > 0):
            raise ValueError("rho must be positive")
        if self.kind == "disk-minus-point" and not (self.a and 0 < self.a < 1):
            raise ValueError("a must lie in (0, 1)")


def unit_disk() -> DensityModel:
    return DensityModel("unit-disk")


def punctured_disk() -> DensityModel:
    return DensityModel("punctured-disk")


def eps_punctured_disk(eps) -> DensityModel:
    return DensityModel("eps-punctured-disk", eps=float(eps))


def ball(rho) -> DensityModel:
    return DensityModel("ball", rho=float(rho))


def disk_minus_point(a) -> DensityModel:
    return DensityModel("disk-minus-point", a=float(a))


def density(model: DensityModel, z, prec: int = DEFAULT_PREC) -> mpf:
    """Poincare density of the model domain at z (coefficient of |dz|)."""
    with mp.workprec(prec):
        z = mpc(z)
        r = abs(z)
        if model.kind == "unit-disk":
            if r >= 1:
                raise DomainError("point outside the unit disk")
            return +(2 / (1 - r * r))
        if model.kind == "punctured-disk":
            if r >= 1 or r == 0:
                raise DomainError("point outside the punctured disk")
            return +(1 / (r * mp.log(1 / r)))
        if model.kind == "eps-punctured-disk":
            eps = mpf(model.eps)
            if r >= eps or r == 0:
                raise DomainError("point outside the punctured eps-disk")
            return +(1 / (r * mp.log(eps / r)))
        if model.kind == "ball":
            rho = mpf(model.rho)
            if r >= rho:
                raise DomainError("point outside the ball")
            return +(2 * rho / (rho * rho - r * r))
        # disk-minus-point: pull the punctured-disk density back through the
        # Moebius map T(z) = (a - z)/(1 - a z), which sends a to 0
        a = mpf(model.a)
        if r >= 1:
            raise DomainError("point outside the unit disk")
        if abs(z - a) == 0:
            raise DomainError("point at the puncture")
        T = (a - z) / (1 - a * z)
        dT = abs((a * a - 1) / (1 - a * z) ** 2)
        w = abs(T)
        return +(dT / (w * mp.log(1 / w)))


def rad_from_density(rho0, prec: int = DEFAULT_PREC) -> mpf:
    """Conformal radius at 0 from the density there: rad = 2/rho(0)."""
    with mp.workprec(prec):
        rho0 = mpf(rho0)
        if rho0 <= 0:
            raise ValueError("density must be positive")
        return +(2 / rho0)


def disk_minus_point_radius(a, prec: int = DEFAULT_PREC) -> mpf:
    """Conformal radius at 0 of the unit disk minus the real point a in (0,1):
    2 a log(1/a) / (1 - a^2)."""
    with mp.workprec(prec):
        a = mpf(a)
        if not 0 < a < 1:
            raise ValueError("a must lie in (0, 1)")
        return +(2 * a * mp.log(1 / a) / (1 - a * a))


# ---------------------------------------------------------------------------
# the slit domain map and its constants


def phi_q(z, q: int, prec: int = DEFAULT_PREC) -> mpc:
    """Conformal map of the disk onto the plane minus q radial slits:
    z * (4 / (1 - z^q)^2)^(1/q), principal branch."""
    if q < 1:
        raise ValueError("q must be >= 1")
    with mp.workprec(prec):
        z = mpc(z)
        return +(z * (4 / (1 - z ** q) ** 2) ** (mpf(1) / q))


def rho_q(q: int, prec: int = DEFAULT_PREC) -> mpf:
    """Radius of the round disk guaranteed inside the fundamental region:
    (1 - tan(pi/4q)) / (1 + tan(pi/4q))."""
    if q < 1:
        raise ValueError("q must be >= 1")
    with mp.workprec(prec):
        t = mp.tan(mp.pi / (4 * q))
        return +((1 - t) / (1 + t))


def douady_constant(prec: int = DEFAULT_PREC) -> mpf:
    """C = log 4 + 2 log(1 + sqrt 2), approx 3.1490."""
    with mp.workprec(prec):
        return +(mp.log(4) + 2 * mp.log(1 + mp.sqrt(2)))


def douady_bound(q: int, r, prec: int = DEFAULT_PREC) -> mpf:
    """log rad of the disk minus q points equidistributed on the circle of
    radius r: at most log r + C/q."""
    if q < 2:
        raise ValueError("q must be >= 2")
    with mp.workprec(prec):
        r = mpf(r)
        if not 0 < r < 1:
            raise ValueError("r must lie in (0, 1)")
        return +(mp.log(r) + douady_constant(prec) / q)


def koebe_v0_bound(alpha0, q1: int, prec: int = DEFAULT_PREC) -> mpf:
    """One-quarter-theorem bound for the base domain: -log q1 + log(8 pi)."""
    with mp.workprec(prec):
        a0 = mpf(alpha0)
        if not 0 < a0 < mpf(1) / 2:
            raise ValueError("alpha0 must lie in (0, 1/2)")
        if q1 != int(mp.floor(1 / a0)):
            raise ValueError("q1 must equal floor(1/alpha0)")
        return +(-mp.log(q1) + mp.log(8 * mp.pi))


def chord_bound_ok(alpha, prec: int = DEFAULT_PREC) -> bool:
    """|1 - e^(2 pi i alpha)| = 2 sin(pi alpha) < 2 pi alpha for alpha in (0, 1/2)."""
    with mp.workprec(prec):
        a = mpf(alpha)
        chord = abs(1 - mp.e ** (2j * mp.pi * a))
        return chord < 2 * mp.pi * a


# ---------------------------------------------------------------------------
# the multiplier-one curve in parameter space


def bcurve_f(x, prec: int = DEFAULT_PREC) -> mpf:
    """Height of the curve Re(e^(2 pi i alpha)) = 1 below the real axis:
    f(x) = log(cos(2 pi x)) / (2 pi), defined for |x mod 1| < 1/4."""
    with mp.workprec(prec):
        x = mpf(x)
        c = mp.cos(2 * mp.pi * x)
        if c <= 0:
            raise DomainError("x outside (-1/4, 1/4) mod 1")
        return +(mp.log(c) / (2 * mp.pi))


def bcurve_g(x, prec: int = DEFAULT_PREC) -> mpf:
    """g(x) = x^2 + f(x - x^2); negativity on (0, 1/2) gives the 1/q^2
    clearance of rationals from the curve."""
    with mp.workprec(prec):
        x = mpf(x)
        return +(x * x + bcurve_f(x - x * x, prec))


@dataclass(frozen=True)
class BCurveAuditReport:
    grid_size: int
    violations: int
    min_slack_g: float        # min of -g(x) over the grid
    min_slack_tan: float      # min of 2u/(1-2u) - tan(2 pi u^2)
    min_slack_sin: float      # min of 2 pi u^2 - sin(2 pi u^2)
    min_slack_cos: float      # min of cos(2 pi u^2) - (1 - 4 u^2)
    min_slack_cos2: float     # min of (1 - 4 u^2) - pi u (1 - 2u)
    conclusion: str = "clearance radius of p/q from the multiplier-one curve >= 1/q^2 for q >= 2"

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self):
        d = self.__dict__.copy()
        d["ok"] = self.ok
        return d


def bcurve_audit(grid_size: int, prec: int = DEFAULT_PREC,
                 csv_path=None) -> BCurveAuditReport:
    """Grid verification that g < 0 on (0, 1/2) along with the elementary
    trig inequalities that force it.  A violation falsifies the
    implementation; it is reported, not raised."""
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    violations = 0
    slack_g = slack_tan = slack_sin = slack_cos = slack_cos2 = mpf("inf")
    rows = []
    with mp.workprec(prec):
        for j in range(1, grid_size):
            x = mpf(j) / (2 * grid_size)  # grid over (0, 1/2)
            g = bcurve_g(x, prec)
            rows.append((x, g))
            slack_g = min(slack_g, -g)
            if g >= 0:
                violations += 1
            u = mpf(1) / 2 - x
            if u > 0:
                s_tan = 2 * u / (1 - 2 * u) - mp.tan(2 * mp.pi * u * u)
                s_sin = 2 * mp.pi * u * u - mp.sin(2 * mp.pi * u * u)
                s_cos = mp.cos(2 * mp.pi * u * u) - (1 - 4 * u * u)
                s_cos2 = (1 - 4 * u * u) - mp.pi * u * (1 - 2 * u)
                for s in (s_tan, s_sin, s_cos, s_cos2):
                    if s <= 0:
                        violations += 1
                slack_tan = min(slack_tan, s_tan)
                slack_sin = min(slack_sin, s_sin)
                slack_cos = min(slack_cos, s_cos)
                slack_cos2 = min(slack_cos2, s_cos2)
    if csv_path:
        emit_grid_csv(csv_path, ("x", "g"), rows)
    return BCurveAuditReport(grid_size, violations, float(slack_g),
                             float(slack_tan), float(slack_sin),
                             float(slack_cos), float(slack_cos2))


# ---------------------------------------------------------------------------
# moving-range bounds


def moving_range(lambda_abs, prec: int = DEFAULT_PREC) -> mpf:
    """log of the radius containing every moved covering domain when the
    motion parameter has modulus lambda_abs: 2 log(4) / (1 + 1/|lambda|)."""
    with mp.workprec(prec):
        lam = mpf(lambda_abs)
        if not 0 < lam < 1:
            raise ValueError("lambda_abs must lie in (0, 1)")
        return +(2 * mp.log(4) / (1 + 1 / lam))


def moving_range_q(q: int, prec: int = DEFAULT_PREC) -> mpf:
    """Specialisation |lambda| <= 3/(2q): log(16) / (1 + q/1.5)."""
    if q < 2:
        raise ValueError("q must be >= 2")
    with mp.workprec(prec):
        return +(mp.log(16) / (1 + q / mpf("1.5")))


# ---------------------------------------------------------------------------
# relative Schwarz lemma checks on model domains


def _schwarz_grid(n: int) -> list:
    """Polar grid in the open unit disk, endpoints avoided."""
    pts = []
    rings = max(2, int(mp.sqrt(n)))
    spokes = max(4, n // rings)
    for i in range(1, rings + 1):
        r = mpf(i) / (rings + 1)
        for k in range(spokes):
            theta = 2 * mp.pi * k / spokes + mpf(1) / (7 * (i + 1))
            pts.append(r * mp.e ** (1j * theta))
    return pts


def relative_schwarz_check(k: int, puncture, grid_n: int = 400,
                           prec: int = DEFAULT_PREC) -> mpf:
    """Max violation of the relative Schwarz inequalities for f(z) = z^k
    from the disk to itself with the target punctured at `puncture`.

    k = 1 reduces to pointwise monotonicity of densities under inclusion,
    rho_D <= rho_{D minus puncture}.  For k >= 2 the pullback density has no
    closed form, so near each preimage root the pulled-back punctured
    density is compared against the density of a small punctured disk
    contained in the preimage domain (a valid upper bound for it), and the
    conformal-radius decay consequence rad(D minus {a}) <= rad(D minus
    {a^(1/k)}) is checked through the closed forms.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    with mp.workprec(prec):
        a = mpc(puncture)
        if not 0 < abs(a) < 1:
            raise ValueError("puncture must lie in the punctured unit disk")
        worst = mpf(0)
        if k == 1:
            model = disk_minus_point(abs(a))
            rot = a / abs(a)
            for z in _schwarz_grid(grid_n):
                w = z / rot  # rotate so the puncture is real positive
                if abs(w - abs(a)) < mpf("1e-12"):
                    continue
                lhs = density(unit_disk(), w, prec)
                rhs = density(model, w, prec)
                worst = max(worst, lhs - rhs)
            return +worst
        # k >= 2: roots of the puncture under z -> z^k
        roots = [abs(a) ** (mpf(1) / k) * mp.e ** (1j * (mp.arg(a) + 2 * mp.pi * j) / k)
                 for j in range(k)]
        model_y = disk_minus_point(abs(a))
        rot_y = a / abs(a)
        for j, r0 in enumerate(roots):
            sep = min(min(abs(r0 - roots[i]) for i in range(k) if i != j),
                      1 - abs(r0))
            for t in range(1, 12):
                z = r0 + (sep / 2) * mpf(t) / 12 * mp.e ** (1j * mpf(t))
                fz = z ** k
                if abs(fz) >= 1 or abs(fz - a) == 0:
                    continue
                pullback = k * abs(z) ** (k - 1) * density(model_y, fz / rot_y, prec)
                d = abs(z - r0)
                local = 1 / (d * mp.log((sep / 2) / d))
                worst = max(worst, pullback - local)
        # conformal-radius decay through the closed forms
        rad_fine = disk_minus_point_radius(abs(a) ** (mpf(1) / k), prec)
        rad_coarse = disk_minus_point_radius(abs(a), prec)
        worst = max(worst, rad_coarse - rad_fine)
        return +worst


# ---------------------------------------------------------------------------
# CSV emission for external plotting


def emit_grid_csv(path, header: tuple, rows: Iterable[tuple]):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([mp.nstr(v, 25) if isinstance(v, (mpf, mpc)) else v
                        for v in row])


def density_profile_rows(model: DensityModel, n: int = 200,
                         prec: int = DEFAULT_PREC) -> list:
    """(r, density) samples along the positive real radius, for plotting."""
    rows = []
    with mp.workprec(prec):
        limit = mpf(model.rho) if model.kind == "ball" else (
            mpf(model.eps) if model.kind == "eps-punctured-disk" else mpf(1))
        for j in range(1, n):
            r = limit * j / n
            try:
                rows.append((r, density(model, r, prec)))
            except DomainError:
                continue
    return rows

"""Builders for the planes the library is about.

build_smoothed_cone     nonnegative, non-increasing curvature that is
                        exactly zero beyond a finite radius, tuned so the
                        slope at infinity hits a prescribed s in (0, 1]:
                        an asymptotically conical plane with a C^2 cap.
build_bulge_plane       a spherical bulge (K = 1, so m = sin r) out to a,
                        then a smooth drop into strongly negative
                        curvature: the slope vanishes at pi/2, giving a
                        closed geodesic there and a disconnected critical
                        set.
build_flared_cone       a smoothed cone whose curvature is later dropped
                        below zero, placed so that a chosen non-critical
                        radius stays non-critical no matter the tail:
                        the critical set disconnects while m' stays
                        positive everywhere.
build_bounded_table_plane
                        a table-sampled curvature whose profile m stays
                        bounded, so the radial inverse-square integral
                        diverges and only the origin is critical.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import curvature as cv
from . import geodesics as gd
from . import jacobi
from . import quadrature as qd
from .errors import BuildError, StarViolation


@dataclass
class ConeBuild:
    profile: object
    spec: object
    u: float
    z: float
    eps: float
    rho: float      # beyond here the curvature is identically zero
    slope: float    # m' on [rho, infinity), equal to the requested s


@dataclass
class BulgeBuild:
    profile: object
    spec: object
    a: float
    mu: float
    w: float


@dataclass
class FlareBuild:
    profile: object
    spec: object
    r_q: float               # chosen non-critical radius
    splice_radius: float     # where the curvature drop starts
    base_critical_radius: float
    base: ConeBuild


@dataclass
class TableBuild:
    profile: object
    spec: object


def _cap_slope(u, eps, tol):
    """Slope at infinity of the capped inverse-square plane for this u."""
    z = cv.isq_zero(u)
    spec = cv.isq_capped(u, eps)
    prof = jacobi.solve_jacobi(spec, r_max=z + eps + 2.0, tol=tol)
    return prof.mp(z + eps)


def build_smoothed_cone(s, eps=None, tail=60.0, slope_tol=1e-9, tol=1e-10,
                        max_iter=60):
    """Plane with K >= 0 non-increasing, K = 0 beyond rho, slope exactly s.

    The inverse-square family 1/(4(r+1)^2) - u crosses zero at
    z = 1/(2 sqrt u) - 1; capping it smoothly to zero near z leaves the
    profile linear beyond with some slope sigma(u), increasing in u.
    Bisection on u pins sigma to s within slope_tol.  s = 1 degenerates
    to the flat plane.
    """
    if not 0.0 < s <= 1.0:
        raise BuildError(f"slope s must lie in (0, 1], got {s}")
    if s == 1.0:
        spec = cv.constant(0.0)
        prof = jacobi.solve_jacobi(spec, r_max=tail, tol=tol)
        return ConeBuild(prof, spec, u=0.0, z=0.0, eps=0.0, rho=0.0, slope=1.0)

    # where the uncapped (u = 0) profile has slope s: a good first guess
    def slope0(z):
        return (2.0 + math.log(z + 1.0)) / (2.0 * math.sqrt(z + 1.0)) - s

    z_guess = brentq(slope0, 1e-8, 1e8, xtol=1e-10, rtol=1e-14)
    u_guess = 0.25 / (z_guess + 1.0) ** 2

    def eps_for(u):
        z = cv.isq_zero(u)
        return eps if eps is not None else min(0.1, z / 10.0)

    def f(u):
        return _cap_slope(u, eps_for(u), tol) - s

    lo, hi = u_guess / 3.0, min(u_guess * 3.0, 0.25)
    f_lo, f_hi = f(lo), f(hi)
    for _ in range(8):
        if f_lo < 0.0:
            break
        lo /= 3.0
        f_lo = f(lo)
    for _ in range(8):
        if f_hi > 0.0:
            break
        hi = min(hi * 3.0, 0.25)
        f_hi = f(hi)
    if not (f_lo < 0.0 < f_hi):
        raise BuildError(f"could not bracket the slope {s} in the capped family")
    u_star = brentq(f, lo, hi, xtol=1e-16, rtol=8.9e-16, maxiter=max_iter)

    e_star = eps_for(u_star)
    z_star = cv.isq_zero(u_star)
    rho = z_star + e_star
    spec = cv.isq_capped(u_star, e_star)
    if not spec.blend_is_monotone():
        raise BuildError("curvature cap lost monotonicity; widen eps")
    prof = jacobi.solve_jacobi(spec, r_max=rho + tail, tol=tol)
    achieved = prof.mp(rho)
    if abs(achieved - s) > slope_tol:
        raise BuildError(
            f"slope tuning stalled: wanted {s}, achieved {achieved} "
            f"(|diff| = {abs(achieved - s):.3g} > {slope_tol:g})"
        )
    return ConeBuild(prof, spec, u=u_star, z=z_star, eps=e_star, rho=rho,
                     slope=achieved)


def build_bulge_plane(a=3 * math.pi / 4, mu=8.0, w=0.25, r_max=50.0, tol=1e-10):
    """Spherical bulge out to a, then a drop of depth mu over width w.

    Requires a in (pi/2, pi) so the slope m' = cos r has already turned
    negative at the splice; the drop must then be deep and narrow enough
    for m to pull out of its dive -- too shallow a drop (for example
    mu = 2, w = 1 at a = 3 pi/4) lets m reach zero, and the builder
    rejects it with the located zero.
    """
    if not math.pi / 2 < a < math.pi:
        raise BuildError(f"bulge extent a must lie in (pi/2, pi), got {a}")
    spec = cv.spliced(cv.constant(1.0), a, cv.DropParams(mu, w))
    try:
        prof = jacobi.solve_jacobi(spec, r_max=r_max, tol=tol)
    except StarViolation as exc:
        raise BuildError(
            f"profile vanishes at r = {exc.first_zero:.6g}: the drop "
            f"(mu={mu}, w={w}) is too weak to stop the collapse after the "
            f"bulge; deepen or narrow it"
        ) from exc
    return BulgeBuild(prof, spec, a=a, mu=mu, w=w)


def build_flared_cone(s_base=0.3, mu=1.0, w=1.0, rq_factor=1.5, margin=0.01,
                      tail=40.0, tol=1e-10):
    """Positive-slope plane whose critical set is disconnected.

    Starts from a smoothed cone (slope s_base, finite critical ball),
    picks the non-critical radius r_q = rq_factor * (critical ball
    radius), finds a splice radius R far enough out that the tangential
    geodesic from r_q turns past pi while still inside [r_q, R], and
    drops the curvature below zero beyond R.  Whatever the tail does,
    r_q stays non-critical; far radii become critical again, and m'
    remains positive everywhere.
    """
    from .analysis import critical_ball_radius

    if rq_factor <= 1.0:
        raise BuildError("rq_factor must exceed 1 (the point must be non-critical)")
    base = build_smoothed_cone(s_base, tol=tol)
    r_crit = critical_ball_radius(base.profile)
    if not 0.0 < r_crit < math.inf:
        raise BuildError(
            f"base cone must have a finite positive critical ball, got {r_crit}"
        )
    r_q = rq_factor * r_crit
    c = base.profile.m(r_q)
    total = gd.turn_angle(base.profile, r_q, math.pi / 2, tol=1e-10)
    excess = total.value - math.pi - margin
    if total.status != "converged" or excess <= 0.0:
        raise BuildError(
            f"tangential turn angle {total.value:.6g} leaves no room above "
            f"pi + {margin}; increase rq_factor"
        )
    # the exact linear tail says how far out the leftover swing 'excess'
    # is pushed: beyond R the remaining turn is arcsin(c/m(R)) / slope
    sigma = base.slope
    arg = min(sigma * excess, math.pi / 2 - 1e-9)
    m_R = c / math.sin(arg)
    R = base.rho + max((m_R - base.profile.m(base.rho)) / sigma, 0.0)
    R = max(R, r_q + 1.0, base.rho + 1.0)

    for _ in range(8):
        long_prof = jacobi.solve_jacobi(base.spec, r_max=R + 1.0, tol=tol)
        partial = qd.integrate_turn_rate(long_prof, c, r_lo=r_q, r_hi=R,
                                         tol=1e-10)
        if partial.value >= math.pi + margin / 2.0:
            break
        R *= 1.25
    else:
        raise BuildError("could not push the partial turn past pi; bad geometry")

    spec = cv.spliced(base.spec, R, cv.DropParams(mu, w))
    prof = jacobi.solve_jacobi(spec, r_max=R + tail, tol=tol)
    grid = np.linspace(0.0, prof.r_max, 16384)
    min_slope = float(np.min(prof.mp(grid)))
    if min_slope <= 0.0:
        raise BuildError(f"slope dips to {min_slope:.3g}; flare failed")
    return FlareBuild(prof, spec, r_q=float(r_q), splice_radius=float(R),
                      base_critical_radius=float(r_crit), base=base)


def build_bounded_table_plane(r_max=60.0, n=1201, tol=1e-10):
    """Table-sampled curvature 3/(1+r^2)^2: its profile is r/sqrt(1+r^2),
    which stays below 1, so the inverse-square radial integral diverges."""
    r = np.linspace(0.0, r_max, n)
    K = 3.0 / (1.0 + r * r) ** 2
    spec = cv.table(r, K, extrapolate="constant")
    prof = jacobi.solve_jacobi(spec, r_max=r_max, tol=tol)
    return TableBuild(prof, spec)

"""Radial profiles m(r) from prescribed curvature.

The warping function of a rotationally symmetric plane solves the Jacobi
initial value problem

    m'' + K(r) m = 0,   m(0) = 0,   m'(0) = 1,

and the plane is smooth and complete iff m stays positive for r > 0.
This module integrates that IVP with dense output, watches for a zero of
m (raising StarViolation with the located root), and provides the profile
queries everything else is built on: pointwise m and m', comparison of two
profiles (Sturm), the embedding profile in Euclidean 3-space, the slope at
infinity, and total curvature.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, quad, solve_ivp
from scipy.interpolate import PchipInterpolator

from . import curvature as cv
from .errors import OutOfWindow, StarViolation

# below this radius the truncated Taylor seed is more accurate than the ODE
SEED_RADIUS = 1e-6


class Profile:
    """Dense solution of the Jacobi IVP for one curvature spec on [0, r_max]."""

    def __init__(self, spec, sol, r_max, tol):
        self.spec = spec
        self._sol = sol
        self.r_max = float(r_max)
        self.tol = float(tol)
        self._k0 = spec.evaluate(0.0)
        self._mono = None
        self._mgrid = None

    def _check_window(self, r):
        if np.any(r < 0) or np.any(r > self.r_max * (1 + 1e-12)):
            bad = r[(r < 0) | (r > self.r_max * (1 + 1e-12))]
            raise OutOfWindow(
                f"r = {np.atleast_1d(bad)[0]:.6g} outside solved window [0, {self.r_max:.6g}]"
            )

    def _eval(self, r, row):
        scalar = np.isscalar(r)
        r = np.atleast_1d(np.asarray(r, dtype=float))
        self._check_window(r)
        out = np.empty_like(r)
        small = r < SEED_RADIUS
        if np.any(small):
            rs = r[small]
            if row == 0:
                out[small] = rs - self._k0 * rs**3 / 6.0
            else:
                out[small] = 1.0 - self._k0 * rs**2 / 2.0
        if np.any(~small):
            rb = np.clip(r[~small], SEED_RADIUS, self.r_max)
            out[~small] = self._sol(rb)[row]
        return float(out[0]) if scalar else out

    def m(self, r):
        """Warping function m(r); scalar or array, r in [0, r_max]."""
        return self._eval(r, 0)

    def mp(self, r):
        """Radial derivative m'(r)."""
        return self._eval(r, 1)

    def K(self, r):
        return self.spec.evaluate(r)

    @property
    def monotone_increasing(self):
        """True when m' > 0 on a dense sample of the whole window.

        Cached after the first access.  Integrators use this to skip the
        search for interior wells of m, which cannot exist when the profile
        climbs everywhere.
        """
        if self._mono is None:
            grid = np.linspace(0.0, self.r_max, 4096)
            self._mono = bool(np.all(self.mp(grid) > 0.0))
        return self._mono

    def _dense_m(self):
        """Cached dense sample (r, m, m') over the window, for bracket scans.

        Root-finding and trap-detection helpers slice this instead of
        re-evaluating the dense ODE output thousands of points at a time
        on every call.
        """
        if self._mgrid is None:
            r = np.linspace(0.0, self.r_max, 8192)
            self._mgrid = (r, self.m(r), self.mp(r))
        return self._mgrid

    def __repr__(self):
        return f"Profile({self.spec!r}, r_max={self.r_max:.6g})"


def solve_jacobi(spec, r_max=200.0, tol=1e-10):
    """Integrate m'' + K m = 0, m(0)=0, m'(0)=1 on [0, r_max].

    Returns a Profile with dense output.  Raises StarViolation when m
    vanishes at some r > 0 (the root is located to better than 1e-10);
    the exception carries that first zero.  The window is clipped to the
    curvature's declared domain.
    """
    if not (1e-14 < tol < 1e-3):
        raise ValueError(f"tol must lie in (1e-14, 1e-3), got {tol}")
    if not r_max > SEED_RADIUS:
        raise ValueError(f"r_max must exceed {SEED_RADIUS}")
    r_max = min(float(r_max), spec.domain_hi)

    def rhs(r, y):
        return [y[1], -spec.evaluate(r) * y[0]]

    def hit_zero(r, y):
        return y[0]

    hit_zero.terminal = True
    hit_zero.direction = -1

    k0 = spec.evaluate(0.0)
    h0 = SEED_RADIUS
    y0 = [h0 - k0 * h0**3 / 6.0, 1.0 - k0 * h0**2 / 2.0]
    sol = solve_ivp(
        rhs,
        (h0, r_max),
        y0,
        method="DOP853",
        rtol=tol,
        atol=tol * 1e-4,
        dense_output=True,
        events=hit_zero,
    )
    if not sol.success:
        raise RuntimeError(f"Jacobi integration failed: {sol.message}")
    if sol.t_events[0].size > 0:
        raise StarViolation(sol.t_events[0][0])
    return Profile(spec, sol.sol, r_max, tol)


# --- Sturm comparison ----------------------------------------------------


@dataclass
class SturmReport:
    """Grid check that lower curvature gives the larger profile.

    With K_hi(r) >= K_lo(r) everywhere (and K_lo non-increasing), the
    profile under K_lo dominates: m_lo >= m_hi; if additionally
    m_hi' >= 0 on the window then m_lo' >= m_hi' as well.
    """

    curvature_ordered: bool
    m_ordered: bool
    mp_ordered: bool
    max_m_violation: float
    max_mp_violation: float


def sturm_compare(profile_hi_k, profile_lo_k, n=512, tol=1e-7):
    """Compare two profiles whose curvatures are pointwise ordered.

    profile_hi_k is the one with larger curvature.  Checks on a shared
    grid that the curvature ordering actually holds and that the
    comparison inequalities m_lo >= m_hi and (when m_hi' >= 0)
    m_lo' >= m_hi' come out, up to tol.
    """
    hi = min(profile_hi_k.r_max, profile_lo_k.r_max)
    r = np.linspace(0.0, hi, n)
    k_hi = profile_hi_k.K(r)
    k_lo = profile_lo_k.K(r)
    curvature_ordered = bool(np.all(k_hi >= k_lo - 1e-12))
    m_hi = profile_hi_k.m(r)
    m_lo = profile_lo_k.m(r)
    # violations measured relative to scale of m
    scale = np.maximum(np.abs(m_hi), 1.0)
    m_gap = (m_hi - m_lo) / scale
    max_m_violation = float(np.max(m_gap))
    mp_hi = profile_hi_k.mp(r)
    mp_lo = profile_lo_k.mp(r)
    if np.all(mp_hi >= -tol):
        pscale = np.maximum(np.abs(mp_hi), 1.0)
        mp_gap = (mp_hi - mp_lo) / pscale
        max_mp_violation = float(np.max(mp_gap))
    else:
        max_mp_violation = math.nan  # comparison of slopes needs m_hi' >= 0
    return SturmReport(
        curvature_ordered=curvature_ordered,
        m_ordered=max_m_violation <= tol,
        mp_ordered=(not math.isnan(max_mp_violation)) and max_mp_violation <= tol,
        max_m_violation=max_m_violation,
        max_mp_violation=max_mp_violation,
    )


# --- embedding in 3-space ------------------------------------------------


def embed_profile(profile, n=1024, r_hi=None):
    """Isometric embedding of the plane as a surface of revolution.

    Returns (r, radius, height): at arclength r from the apex the surface
    sits at distance radius = m(r) from the axis and height
    z(r) = integral of sqrt(1 - m'^2).  Requires |m'| <= 1 on the window;
    raises ValueError otherwise (the plane spreads too fast to embed).
    """
    hi = profile.r_max if r_hi is None else min(r_hi, profile.r_max)
    r = np.linspace(0.0, hi, n)
    mp = profile.mp(r)
    overshoot = np.max(np.abs(mp)) - 1.0
    if overshoot > 1e-9:
        raise ValueError(
            f"|m'| reaches {1.0 + overshoot:.6g} > 1; "
            "no rotationally symmetric embedding in Euclidean 3-space"
        )
    dz = np.sqrt(np.clip(1.0 - mp**2, 0.0, None))
    z = cumulative_trapezoid(dz, r, initial=0.0)
    return r, profile.m(r), z


# --- asymptotics ---------------------------------------------------------


@dataclass
class SlopeReport:
    value: float
    spread: float
    window_limited: bool


def slope_at_infinity(profile, spread_tol=1e-6):
    """Two-window estimate of lim m'(r).

    Compares m' at r_max and r_max/2; if they differ by more than
    spread_tol the window has not captured the limit and the report is
    flagged window_limited.
    """
    v1 = profile.mp(profile.r_max)
    v0 = profile.mp(profile.r_max / 2.0)
    spread = abs(v1 - v0)
    return SlopeReport(value=float(v1), spread=float(spread), window_limited=spread > spread_tol)


@dataclass
class TotalCurvatureReport:
    value: float
    boundary_route: float
    integral_route: float
    agreement: float
    finite: bool
    window_limited: bool


def total_curvature(profile, spread_tol=1e-6):
    """Total curvature of the plane, by two independent routes.

    The boundary route evaluates 2 pi (1 - m'(r_max)); the integral route
    integrates 2 pi K(r) m(r) dr numerically over the window.  Their
    agreement is reported.  When the slope is still growing between the
    half and full windows by more than 1, the integral diverges to -oo
    and the value is reported as -inf.
    """
    s = slope_at_infinity(profile, spread_tol)
    boundary = 2.0 * math.pi * (1.0 - s.value)

    def dtc(r):
        return profile.K(r) * profile.m(r)

    integral, _ = quad(dtc, 0.0, profile.r_max, limit=300)
    integral *= 2.0 * math.pi
    agreement = abs(boundary - integral) / max(abs(boundary), 1.0)
    diverging = s.spread > 1.0 and s.value > 1.0
    return TotalCurvatureReport(
        value=-math.inf if diverging else boundary,
        boundary_route=boundary,
        integral_route=integral,
        agreement=float(agreement),
        finite=not diverging,
        window_limited=s.window_limited,
    )


# --- tabulated profiles and CSV round-trips ------------------------------


class TabulatedProfile:
    """Profile backed by sampled columns (r, m, mp, K), PCHIP-interpolated."""

    def __init__(self, r, m, mp, K):
        r = np.asarray(r, dtype=float)
        self._m = PchipInterpolator(r, np.asarray(m, dtype=float), extrapolate=False)
        self._mp = PchipInterpolator(r, np.asarray(mp, dtype=float), extrapolate=False)
        self.spec = cv.table(r, K, extrapolate="constant")
        self.r_max = float(r[-1])
        self.r_min = float(r[0])
        self.tol = math.nan

    def _eval(self, interp, r):
        scalar = np.isscalar(r)
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = interp(r)
        if np.any(np.isnan(out)):
            bad = r[np.isnan(out)][0]
            raise OutOfWindow(
                f"r = {bad:.6g} outside tabulated window [{self.r_min:.6g}, {self.r_max:.6g}]"
            )
        return float(out[0]) if scalar else out

    def m(self, r):
        return self._eval(self._m, r)

    def mp(self, r):
        return self._eval(self._mp, r)

    def K(self, r):
        return self.spec.evaluate(r)


def export_profile_csv(profile, path, n=2001, r_hi=None):
    """Write columns r,m,mp,K sampled on a uniform grid."""
    hi = profile.r_max if r_hi is None else min(r_hi, profile.r_max)
    r = np.linspace(0.0, hi, n)
    m = profile.m(r)
    mp = profile.mp(r)
    K = profile.K(r)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r", "m", "mp", "K"])
        for row in zip(r, m, mp, K):
            w.writerow([repr(float(x)) for x in row])


def load_profile_csv(path):
    """Read a profile written by export_profile_csv back as a TabulatedProfile."""
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd)
        if [h.strip() for h in header] != ["r", "m", "mp", "K"]:
            raise ValueError(f"unexpected profile CSV header: {header}")
        cols = [[], [], [], []]
        for row in rd:
            if not row:
                continue
            for c, x in zip(cols, row):
                c.append(float(x))
    return TabulatedProfile(*cols)

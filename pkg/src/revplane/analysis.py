"""Classification of points and the radii attached to a plane.

A point q is *critical* (for the distance to the origin) when the
geodesic leaving q at right angles to the radial direction is a ray,
i.e. its total turn angle is at most pi; q lies in the *away set* when
that turn angle is strictly below pi; and q is a *pole* when every
geodesic leaving it is a ray.  On planes with non-increasing curvature
these sets are rotationally symmetric, the critical set of a
nonnegatively curved plane is a closed ball, and the poles always form
a closed ball -- which is what makes the radii below well-defined:

  critical_ball_radius   radius of the critical ball (0 when the radial
                         inverse-square integral diverges, inf when the
                         slope at infinity is >= 1/2, else the root of
                         turn_angle(x, pi/2) = pi)
  half_slope_radius      where m' first drops to 1/2 (the critical ball,
                         when finite, always ends before it)
  pole_ball_radius       largest radius all of whose points are poles

Boundary comparisons against pi follow the closed-side protocol from the
geodesics module; scan_sets applies it on a log-spaced grid and refines
every set boundary by bisection.
"""

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import geodesics as gd
from . import jacobi
from . import quadrature as qd
from .errors import Undetermined
from .svgplot import SvgCanvas


def is_critical(profile, r_q, tol=1e-8):
    """Whether the tangential geodesic from radius r_q is a ray."""
    return gd.is_ray(profile, r_q, math.pi / 2, tol=tol)


def in_away_set(profile, r_q, tol=1e-8):
    """Whether the tangential turn angle is strictly below pi.

    The strict side of the criticality test: boundary cases resolve to
    False (they are critical but not 'away'), with Undetermined raised
    when a tighter tolerance could still settle the comparison.
    """
    res = gd.turn_angle(profile, r_q, math.pi / 2, tol=tol)
    if res.diverged:
        return False
    band = max(res.abs_error, tol)
    if res.status == qd.STATUS_WINDOW_LIMITED:
        if res.value > math.pi + band:
            return False
        raise Undetermined(res.value, math.inf,
                           "window-limited turn angle cannot certify the strict side")
    if res.value < math.pi - band:
        return True
    if res.value > math.pi + band:
        return False
    if res.abs_error > tol:
        raise Undetermined(res.value, res.abs_error)
    return False


def is_pole(profile, r_q, tol=1e-8, n_grid=25):
    """Whether every geodesic from radius r_q is a ray.

    The turn angle is monotone in the Clairaut constant below kappa =
    pi/2, so only [pi/2, pi) needs scanning.  A coarse grid over
    [pi/2, pi - 0.2] is refined around its maximum by golden-section
    steps, and the approach to the inward radial (where the turn angle
    tends to pi) is probed separately.  Any certified angle beyond pi
    means not a pole; comparisons at the precision floor resolve to the
    pole side.
    """

    def ray_at(kappa):
        try:
            return gd.is_ray(profile, r_q, kappa, tol=tol)
        except Undetermined:
            return True

    def t_at(kappa):
        res = gd.turn_angle(profile, r_q, kappa, tol=tol)
        return res.value if not math.isnan(res.value) else -math.inf

    kappas = np.linspace(math.pi / 2, math.pi - 0.2, n_grid)
    values = [t_at(k) for k in kappas]
    worst = int(np.argmax(values))
    if math.isinf(values[worst]):
        return False
    if not ray_at(kappas[worst]):
        return False
    # golden-section polish around the grid maximum
    lo = kappas[max(worst - 1, 0)]
    hi = kappas[min(worst + 1, n_grid - 1)]
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - phi * (b - a)
    x2 = a + phi * (b - a)
    f1, f2 = t_at(x1), t_at(x2)
    for _ in range(25):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + phi * (b - a)
            f2 = t_at(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - phi * (b - a)
            f1 = t_at(x1)
    peak = x1 if f1 >= f2 else x2
    if not ray_at(peak):
        return False
    # approach to the inward radial: the turn angle tends to pi, so any
    # excursion above pi near it disqualifies
    for kappa in (math.pi - 0.1, math.pi - 0.05, math.pi - 0.02):
        if not ray_at(kappa):
            return False
    return True


# --- radii ---------------------------------------------------------------


def radial_inverse_square_diverges(profile):
    """Window-based divergence call on the integral of 1/m^2.

    Uses the growth exponent p = r m'/m sampled near the window edge:
    the integral converges iff m outgrows sqrt(r), i.e. p > 1/2 with
    margin.  Planes hugging the exponent 1/2 within the window are
    reported divergent (the honest reading of what the window shows).
    """
    R = profile.r_max
    probes = [0.7 * R, 0.85 * R, R]
    p_hat = sorted(r * profile.mp(r) / profile.m(r) for r in probes)
    return p_hat[1] <= 0.55


def half_slope_radius(profile):
    """First radius where m' drops to 1/2 (inf if it never does)."""
    grid = np.linspace(0.0, profile.r_max, 8192)
    mp = profile.mp(grid)
    below = np.nonzero(mp <= 0.5)[0]
    if below.size == 0:
        return math.inf
    i = below[0]
    if i == 0:
        return 0.0
    return float(brentq(lambda r: profile.mp(r) - 0.5, grid[i - 1], grid[i], xtol=1e-12))


def critical_ball_radius(profile, tol=1e-8):
    """Radius of the critical ball.

    0 when the radial inverse-square integral diverges (only the origin
    is critical), inf when the slope at infinity stays >= 1/2 (every
    point is critical), otherwise the root of turn_angle(x, pi/2) = pi,
    which the theory brackets between 0 and the half-slope radius.
    """
    if radial_inverse_square_diverges(profile):
        return 0.0
    slope = jacobi.slope_at_infinity(profile)
    if slope.value >= 0.5 - 1e-9 and not slope.window_limited:
        return math.inf

    def g(x):
        res = gd.turn_angle(profile, x, math.pi / 2, tol=tol)
        return res.value - math.pi

    lo = profile.r_max * 1e-4
    g_lo = g(lo)
    if g_lo >= 0:
        # critical ball smaller than the probe: treat its radius as 0
        return 0.0
    hi = half_slope_radius(profile)
    if math.isinf(hi):
        return math.inf
    hi = min(hi, profile.r_max * 0.9)
    g_hi = g(hi)
    tries = 0
    while g_hi <= 0 and tries < 8:
        hi = min(hi * 1.5, profile.r_max * 0.98)
        g_hi = g(hi)
        tries += 1
    if g_hi <= 0:
        return math.inf
    return float(brentq(g, lo, hi, xtol=1e-9, rtol=1e-12))


def pole_ball_radius(profile, tol=1e-8, rel_tol=1e-3):
    """Largest radius certified to consist of poles (bisection on the
    closed pole ball).  Returns 0.0 when even tiny radii fail, and inf
    when poles persist to the edge of the solved window."""

    def pole_at(x):
        try:
            return is_pole(profile, x, tol=tol)
        except Undetermined:
            return True

    lo = profile.r_max * 1e-4
    if not pole_at(lo):
        return 0.0
    x = lo
    cap = 0.6 * profile.r_max
    while x < cap:
        nxt = min(x * 2.0, cap)
        if pole_at(nxt):
            x = nxt
            if x >= cap:
                return math.inf
        else:
            lo, hi = x, nxt
            break
    else:
        return math.inf
    while hi - lo > rel_tol * max(hi, 1.0):
        mid = 0.5 * (lo + hi)
        if pole_at(mid):
            lo = mid
        else:
            hi = mid
    return float(lo)


# --- set scans -----------------------------------------------------------


def _classify(res, tol):
    """Map a tangential turn angle to (critical, away); None = undetermined."""
    if res.diverged:
        return False, False
    band = max(res.abs_error, tol)
    if res.status == qd.STATUS_WINDOW_LIMITED:
        if res.value > math.pi + band:
            return False, False
        return None, None
    if res.value < math.pi - band:
        return True, True
    if res.value > math.pi + band:
        return False, False
    if res.abs_error > tol:
        return None, None
    return True, False  # boundary at the precision floor: critical, not away


@dataclass
class AnalysisReport:
    """Result of scanning the critical/away structure of a plane."""

    r: list
    turn: list
    abs_error: list
    status: list
    critical: list
    away: list
    critical_intervals: list
    away_intervals: list
    undetermined: list
    r_max: float
    tol: float
    spec: dict | None = None
    radii: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "r": self.r,
            "turn": self.turn,
            "abs_error": self.abs_error,
            "status": self.status,
            "critical": self.critical,
            "away": self.away,
            "critical_intervals": self.critical_intervals,
            "away_intervals": self.away_intervals,
            "undetermined": self.undetermined,
            "r_max": self.r_max,
            "tol": self.tol,
            "spec": self.spec,
            "radii": self.radii,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r", "turn", "abs_error", "status", "critical", "away"])
            for row in zip(self.r, self.turn, self.abs_error, self.status,
                           self.critical, self.away):
                w.writerow([repr(row[0]), repr(row[1]), repr(row[2]),
                            row[3], int(bool(row[4])), int(bool(row[5]))])

    def to_svg(self, path, width=800, height=220):
        canvas = SvgCanvas(width, height)
        margin = 60
        span = width - 2 * margin
        lo, hi = self.r[0], self.r_max
        log_lo, log_hi = math.log10(lo), math.log10(hi)

        def px(r):
            return margin + span * (math.log10(max(r, lo)) - log_lo) / (log_hi - log_lo)

        rows = [("critical", self.critical_intervals, "#d62728"),
                ("away", self.away_intervals, "#1f77b4")]
        for k, (label, intervals, color) in enumerate(rows):
            y = 60 + 60 * k
            canvas.text(8, y + 14, label, size=13)
            canvas.line(margin, y + 10, width - margin, y + 10, stroke="#cccccc")
            for a, b in intervals:
                canvas.rect(px(a), y, max(px(min(b, hi)) - px(a), 1.5), 20, fill=color)
        decade = math.ceil(log_lo)
        while decade <= math.floor(log_hi):
            x = px(10.0 ** decade)
            canvas.line(x, 50, x, 190, stroke="#eeeeee")
            canvas.text(x, 205, f"1e{decade}", size=11, anchor="middle")
            decade += 1
        canvas.text(margin, 30, f"tangential-geodesic sets, r in [{lo:.3g}, {hi:.3g}] (log axis)",
                    size=14)
        canvas.write(path)


def _intervals_from_flags(r, flags):
    """Contiguous True runs as [start, end] pairs over the grid."""
    out = []
    start = None
    for i, f in enumerate(flags):
        if f and start is None:
            start = r[i]
        elif not f and start is not None:
            out.append([start, r[i - 1]])
            start = None
    if start is not None:
        out.append([start, r[-1]])
    return out


def _refine_boundary(r_in, r_out, predicate, iters=40):
    """Bisect a classification boundary between two grid neighbors.

    predicate(r) must hold at r_in and fail at r_out; returns the
    crossing radius.  Undetermined points resolve to the predicate side
    (closed-set convention).
    """
    lo, hi = r_in, r_out
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        try:
            inside = predicate(mid)
        except Undetermined:
            inside = True
        if inside:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-10 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def scan_sets(profile, n=256, tol=1e-8, jobs=None, refine=True):
    """Classify the critical/away structure on a log-spaced radius grid.

    Each grid point gets the tangential turn angle; Undetermined
    comparisons are retried once at tol/100 and recorded as gaps if they
    persist.  Interval endpoints are then sharpened by bisection.
    """
    # keep strictly inside the window: the top endpoint would leave the
    # outgoing integral with an empty range
    r_grid = np.geomspace(profile.r_max * 1e-4, profile.r_max * (1.0 - 1e-9), n)

    def eval_point(r):
        return gd.turn_angle(profile, float(r), math.pi / 2, tol=tol)

    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(eval_point, r_grid))
    else:
        results = [eval_point(r) for r in r_grid]

    critical, away, undet = [], [], []
    for r, res in zip(r_grid, results):
        crit, aw = _classify(res, tol)
        if crit is None and res.status != qd.STATUS_WINDOW_LIMITED:
            res = gd.turn_angle(profile, float(r), math.pi / 2, tol=tol / 100)
            crit, aw = _classify(res, tol / 100)
        if crit is None:
            undet.append(float(r))
            crit, aw = False, False
        critical.append(bool(crit))
        away.append(bool(aw))

    crit_ints = _intervals_from_flags(r_grid, critical)
    away_ints = _intervals_from_flags(r_grid, away)

    if refine:
        def crit_pred(x):
            c, _ = _classify(gd.turn_angle(profile, x, math.pi / 2, tol=tol), tol)
            if c is None:
                raise Undetermined(math.nan, math.nan)
            return c

        def away_pred(x):
            _, a = _classify(gd.turn_angle(profile, x, math.pi / 2, tol=tol), tol)
            if a is None:
                raise Undetermined(math.nan, math.nan)
            return a

        idx = {float(r): i for i, r in enumerate(r_grid)}
        for ints, pred in ((crit_ints, crit_pred), (away_ints, away_pred)):
            for pair in ints:
                i0 = idx[float(pair[0])]
                left = float(pair[0])
                if i0 > 0:
                    pair[0] = float(_refine_boundary(left, r_grid[i0 - 1], pred))
                i1 = idx.get(float(pair[1]))
                if i1 is not None and i1 < n - 1:
                    pair[1] = float(_refine_boundary(float(pair[1]), r_grid[i1 + 1], pred))

    spec_dict = None
    try:
        spec_dict = profile.spec.to_dict()
    except (AttributeError, ValueError):
        pass
    return AnalysisReport(
        r=[float(x) for x in r_grid],
        turn=[float(res.value) for res in results],
        abs_error=[float(res.abs_error) for res in results],
        status=[res.status for res in results],
        critical=critical,
        away=away,
        critical_intervals=[[float(a), float(b)] for a, b in crit_ints],
        away_intervals=[[float(a), float(b)] for a, b in away_ints],
        undetermined=undet,
        r_max=float(profile.r_max),
        tol=float(tol),
        spec=spec_dict,
    )


# --- neck exclusion ------------------------------------------------------


@dataclass
class NeckReport:
    applicable: bool
    reason: str
    b: float
    f: float
    excluded: list | None

    def to_dict(self):
        return {"applicable": self.applicable, "reason": self.reason,
                "b": self.b, "f": self.f, "excluded": self.excluded}


def neck_bound(profile, x, y):
    """Criticality exclusion for a slowly spreading stretch.

    With m' > 0 up to y and m' < 1/2 throughout [x, y], let b be the
    largest slope on [x, y] and f the radius where m equals
    cos(pi b) m(y).  Whenever x <= f, no radius in [x, f] is critical.
    Reports the computed b and f along with whether the hypotheses held.
    """
    if not 0 < x < y <= profile.r_max:
        raise ValueError("need 0 < x < y <= r_max")
    grid_all = np.linspace(0.0, y, 8192)
    mp_all = profile.mp(grid_all)
    if np.any(mp_all <= 0.0):
        return NeckReport(False, "m' vanishes somewhere on [0, y]",
                          math.nan, math.nan, None)
    seg = np.concatenate([[x], grid_all[grid_all > x]])
    mp_seg = profile.mp(seg)
    b = float(np.max(mp_seg))
    # polish the max by a local parabolic refinement on the grid cell
    j = int(np.argmax(mp_seg))
    if 0 < j < len(seg) - 1:
        fine = np.linspace(seg[j - 1], seg[j + 1], 256)
        b = max(b, float(np.max(profile.mp(fine))))
    if b >= 0.5:
        return NeckReport(False, "slope reaches 1/2 on [x, y]", b, math.nan, None)
    target = math.cos(math.pi * b) * profile.m(y)
    m0 = profile.m(grid_all[1])
    if target <= m0:
        return NeckReport(True, "target radius below resolution", b, 0.0, None)
    f = float(brentq(lambda r: profile.m(r) - target, grid_all[1], y, xtol=1e-12))
    excluded = [x, f] if x <= f else None
    return NeckReport(True, "ok" if excluded else "bound does not reach x",
                      b, f, excluded)

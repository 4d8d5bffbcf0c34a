"""Geodesics on a rotationally symmetric plane.

A unit-speed geodesic leaving the circle r = r_q at angle kappa from the
outward radial direction carries the conserved quantity

    c = m(r_q) sin(kappa)        (Clairaut)

and its total turn angle -- the angle swept around the origin over its
whole forward life -- is an improper integral of the turn rate F_c.
Since turn angles are compared against pi to decide whether the geodesic
is a ray (distance-minimizing to infinity), everything here reports an
error band and follows one protocol: a comparison landing inside the
band raises Undetermined if tightening the tolerance could still settle
it, and otherwise resolves to the closed side (the boundary case counts
as a ray).

Traces integrate the geodesic equations in (r, r_dot, theta) form with
the conservation drift monitored, giving an independent check on the
quadrature route.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import quadrature as qd
from .errors import Undetermined
from .svgplot import SvgCanvas, fit_transform

STATUS_RADIAL_INWARD = "radial_inward"


@dataclass(frozen=True)
class GeodesicLaunch:
    """Starting data of a geodesic: radius, angle from outward radial, and
    the Clairaut constant they induce."""

    r_q: float
    kappa: float
    c: float

    @classmethod
    def at_angle(cls, profile, r_q, kappa):
        if not 0.0 <= kappa <= math.pi:
            raise ValueError(f"kappa must lie in [0, pi], got {kappa}")
        if not r_q > 0:
            raise ValueError(f"launch radius must be positive, got {r_q}")
        return cls(r_q=float(r_q), kappa=float(kappa),
                   c=float(profile.m(r_q) * math.sin(kappa)))


def turning_radius(profile, c, r_q):
    """Largest r <= r_q with m(r) = c: where an inward-swinging geodesic
    with Clairaut constant c turns back outward."""
    if c == 0.0:
        return 0.0
    m_q = profile.m(r_q)
    if c > m_q * (1 + 1e-12):
        raise ValueError(f"c = {c:.6g} exceeds m(r_q) = {m_q:.6g}")
    if c >= m_q:
        return float(r_q)
    dense = getattr(profile, "_dense_m", None)
    if dense is not None:
        gr_all, gm_all, _ = dense()
        k = int(np.searchsorted(gr_all, r_q, side="left"))
        grid = np.concatenate([gr_all[:k], [r_q]])
        m = np.concatenate([gm_all[:k], [m_q]])
    else:
        grid = np.linspace(0.0, r_q, 4096)
        m = profile.m(grid)
    below = np.nonzero(m < c)[0]
    if below.size == 0:
        # m(0) = 0 < c, so this can only be grid coarseness right at 0
        r_u = float(brentq(lambda r: profile.m(r) - c, 0.0, r_q, xtol=1e-14))
    else:
        i = below[-1]
        r_u = float(brentq(lambda r: profile.m(r) - c, grid[i],
                           grid[min(i + 1, len(grid) - 1)], xtol=1e-14))
    # one Newton polish: brentq's absolute xtol leaves m(r_u) - c around
    # slope * 1e-14, which is coarse relative to c when c itself is tiny
    mp_u = profile.mp(r_u)
    if mp_u > 1e-12:
        r_u = min(max(r_u + (c - profile.m(r_u)) / mp_u, 0.0), float(r_q))
    return r_u


def turn_angle(profile, r_q, kappa, tol=1e-8):
    """Total turn angle of the geodesic launched at (r_q, kappa).

    kappa = 0 is the outward radial (turn 0, exact); kappa = pi is the
    inward radial through the origin, which has no Clairaut turn integral
    -- it gets the distinct status "radial_inward".  For kappa in
    (pi/2, pi) the geodesic first dives to its turning radius and the
    inward leg is counted twice.
    """
    launch = GeodesicLaunch.at_angle(profile, r_q, kappa)
    if kappa == 0.0:
        return qd.IntegralResult(0.0, 0.0, qd.STATUS_CONVERGED)
    if kappa == math.pi:
        return qd.IntegralResult(math.nan, math.nan, STATUS_RADIAL_INWARD)
    c = launch.c
    if kappa <= math.pi / 2:
        return qd.integrate_turn_rate(profile, c, r_lo=r_q, tol=tol)
    r_u = turning_radius(profile, c, r_q)
    leg_in = qd.integrate_turn_rate(profile, c, r_lo=r_u, r_hi=r_q, tol=tol / 2)
    if leg_in.diverged:
        return qd.IntegralResult(math.inf, 0.0, leg_in.status)
    leg_out = qd.integrate_turn_rate(profile, c, r_lo=r_q, tol=tol / 2)
    if leg_out.diverged:
        return qd.IntegralResult(math.inf, 0.0, leg_out.status)
    status = qd.STATUS_WINDOW_LIMITED if leg_out.status == qd.STATUS_WINDOW_LIMITED \
        else qd.STATUS_CONVERGED
    return qd.IntegralResult(2 * leg_in.value + leg_out.value,
                             2 * leg_in.abs_error + leg_out.abs_error, status)


def is_ray(profile, r_q, kappa, tol=1e-8):
    """Whether the geodesic is a ray: turn angle at most pi.

    Comparisons inside the error band follow the closed-side protocol:
    if the error still exceeds tol the call raises Undetermined (retry
    tighter), otherwise the boundary value counts as a ray.  A
    window-limited turn angle not already past pi also raises
    Undetermined, since the unseen tail could push it over.
    """
    if kappa == math.pi:
        # the inward radial: minimal iff every geodesic from here is --
        # answered by the pole test, not by a turn integral
        from .analysis import is_pole
        return is_pole(profile, r_q, tol=tol)
    res = turn_angle(profile, r_q, kappa, tol=tol)
    if res.diverged:
        return False
    band = max(res.abs_error, tol)
    if res.value > math.pi + band:
        return False
    if res.status == qd.STATUS_WINDOW_LIMITED:
        raise Undetermined(res.value, math.inf,
                           "turn angle window-limited and not yet past pi; extend r_max")
    if res.value <= math.pi - band:
        return True
    if res.abs_error > tol:
        raise Undetermined(res.value, res.abs_error)
    return True  # at the precision floor the boundary counts as a ray


def max_ray_angle(profile, r_q, tol=1e-8, kappa_tol=1e-8):
    """Largest launch angle that still gives a ray.

    Monotone in kappa (rays above rays are rays), so bisection applies;
    returns pi exactly when the whole pencil consists of rays (a pole).
    Undetermined comparisons during the search resolve to the ray side,
    consistent with the angle being attained.
    """
    def ray_at(kappa):
        try:
            return is_ray(profile, r_q, kappa, tol=tol)
        except Undetermined:
            return True

    # find a bracketing failure angle: probe from pi/2 upward toward pi.
    # The full pole test is deferred until no failure shows up, since a
    # single certified non-ray already rules a pole out.
    lo = 0.0
    hi = None
    probe = math.pi / 2
    if not ray_at(probe):
        hi = probe
    else:
        lo = probe
        step = math.pi / 4
        while step > kappa_tol / 4:
            probe = lo + step
            if probe >= math.pi:
                probe = math.pi - kappa_tol / 8
            if ray_at(probe):
                lo = probe
            else:
                hi = probe
                break
            step /= 2
        if hi is None:
            # rays all the way to within kappa_tol of pi: either a pole,
            # or report the last certified angle
            from .analysis import is_pole

            if is_pole(profile, r_q, tol=tol):
                return math.pi
            return lo
    while hi - lo > kappa_tol:
        mid = 0.5 * (lo + hi)
        if ray_at(mid):
            lo = mid
        else:
            hi = mid
    return lo


# --- traced geodesics ----------------------------------------------------


@dataclass
class GeodesicTrace:
    """Sampled geodesic path: arclength, radius, angle, radial speed."""

    s: np.ndarray
    r: np.ndarray
    theta: np.ndarray
    r_dot: np.ndarray
    launch: GeodesicLaunch
    status: str
    speed_drift: float
    end_state: tuple = field(default=None)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["s", "r", "theta", "r_dot"])
            for row in zip(self.s, self.r, self.theta, self.r_dot):
                w.writerow([repr(float(x)) for x in row])

    def to_svg(self, path, size=640):
        x = self.r * np.cos(self.theta)
        y = self.r * np.sin(self.theta)
        canvas = SvgCanvas(size, size)
        tf = fit_transform(np.concatenate([x, [0.0]]), np.concatenate([y, [0.0]]),
                           size, size)
        ox, oy = tf(0.0, 0.0)
        for frac in (0.25, 0.5, 0.75, 1.0):
            rr = frac * float(np.max(self.r))
            px, _ = tf(rr, 0.0)
            canvas.circle(ox, oy, abs(px - ox), stroke="#dddddd")
        canvas.circle(ox, oy, 3, fill="#222222", stroke="none")
        canvas.polyline([tf(a, b) for a, b in zip(x, y)], stroke="#d62728", width=1.8)
        sx, sy = tf(x[0], y[0])
        canvas.circle(sx, sy, 4, fill="#1f77b4", stroke="none")
        canvas.text(10, 20, f"r_q={self.launch.r_q:.4g}  kappa={self.launch.kappa:.4g}  "
                            f"c={self.launch.c:.4g}  [{self.status}]", size=13)
        canvas.write(path)


def trace(profile, r_q, kappa, s_max, n_points=1001, rtol=1e-11,
          stop_at_radius=None):
    """Integrate the geodesic equations from (r_q, kappa) for arclength s_max.

    State is (r, r_dot, theta) with theta' = c/m^2 and r_dot' = c^2 m'/m^3.
    Terminates early on reaching the origin (inward radial), the window
    edge, or stop_at_radius if given; status reports which.  The reported
    speed_drift is the worst deviation of r_dot^2 + c^2/m^2 from 1 -- the
    honest conservation check (the Clairaut constant is exact here by
    construction).
    """
    launch = GeodesicLaunch.at_angle(profile, r_q, kappa)
    c = launch.c

    def rhs(s, y):
        r, p, _ = y
        if not c:
            return [p, 0.0, 0.0]
        # trial steps may poke past the window or the origin; the events
        # terminate there, so clamped evaluation is safe
        rc = min(max(r, 1e-12), profile.r_max)
        m = profile.m(rc)
        mp = profile.mp(rc)
        return [p, c * c * mp / m**3, c / (m * m)]

    events = []

    def hit_origin(s, y):
        return y[0] - 1e-9
    hit_origin.terminal = True
    hit_origin.direction = -1
    events.append(hit_origin)

    def hit_window(s, y):
        return y[0] - profile.r_max * (1 - 1e-9)
    hit_window.terminal = True
    hit_window.direction = 1
    events.append(hit_window)

    if stop_at_radius is not None:
        def hit_target(s, y):
            return y[0] - stop_at_radius
        hit_target.terminal = True
        hit_target.direction = 0  # first crossing from either side
        events.append(hit_target)

    y0 = [r_q, math.cos(kappa), 0.0]
    sol = solve_ivp(rhs, (0.0, s_max), y0, method="DOP853", rtol=rtol,
                    atol=rtol * 1e-2, dense_output=True, events=events,
                    t_eval=np.linspace(0.0, s_max, n_points))
    if not sol.success:
        raise RuntimeError(f"geodesic integration failed: {sol.message}")

    names = ["hit_origin", "left_window", "reached_radius"]
    status = "completed"
    s_end = s_max
    y_end = sol.y[:, -1] if sol.y.shape[1] else np.array(y0)
    for name, s_ev, y_ev in zip(names, sol.t_events, sol.y_events):
        if len(s_ev):
            status = name
            s_end = float(s_ev[0])
            y_end = y_ev[0]
            break

    s = sol.t
    r, p, th = sol.y
    if status != "completed" and (len(s) == 0 or s[-1] < s_end):
        # include the event point itself in the sampled arrays
        s = np.append(s, s_end)
        r = np.append(r, y_end[0])
        p = np.append(p, y_end[1])
        th = np.append(th, y_end[2])
    with np.errstate(divide="ignore"):
        m = profile.m(np.maximum(r, 1e-12))
        drift = np.abs(p**2 + (c / m) ** 2 - 1.0) if c else np.abs(p**2 - 1.0)
    return GeodesicTrace(
        s=s, r=r, theta=th, r_dot=p, launch=launch, status=status,
        speed_drift=float(np.max(drift)) if len(s) else 0.0,
        end_state=(s_end, float(y_end[0]), float(y_end[2]), float(y_end[1])),
    )

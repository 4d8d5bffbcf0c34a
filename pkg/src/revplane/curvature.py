"""Curvature functions K(r) on [0, oo).

A curvature spec is a small immutable description of a radial curvature
function.  Builtin kinds:

  constant    K(r) = k
  isq         K(r) = 1/(4(r+1)^2) - u          ("inverse-square shift",
              u in [0, 1/4]; u > 0 crosses zero at z = 1/(2 sqrt u) - 1)
  isq_capped  max(isq_u, 0) with the corner at z smoothed over [z-eps, z+eps]
              by the quintic Hermite blend (C^2, non-increasing, identically
              zero beyond z+eps) -- the curvature of an asymptotically
              conical plane
  spliced     base curvature with a smooth monotone drop of depth mu and
              width w starting at r0
  table       sampled (r, K) pairs, monotone cubic (PCHIP) interpolation
  expression  opaque evaluator handle (not serializable)

Specs serialize to/from JSON as {"kind": ..., "params": {...}} and
round-trip bit-exactly for the builtin numeric kinds.
"""

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import BPoly, PchipInterpolator

from .errors import OutOfWindow

_BUILTIN_KINDS = ("constant", "isq", "isq_capped", "spliced", "table", "expression")

# increases smaller than this per grid cell are treated as roundoff
VM_TOLERANCE = 1e-12


def isq_zero(u):
    """Radius where the isq(u) curvature crosses zero, u in (0, 1/4]."""
    if not 0.0 < u <= 0.25:
        raise ValueError(f"u must be in (0, 1/4], got {u}")
    return 1.0 / (2.0 * math.sqrt(u)) - 1.0


def smoothstep(t):
    """Quintic smoothstep 6t^5 - 15t^4 + 10t^3, clamped to [0, 1].

    Odd-symmetric about the midpoint (S(1-t) = 1 - S(t)) and flat to
    second order at both ends, so a drop shaped by it is C^2 wherever
    it is spliced on.
    """
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0)


@dataclass(frozen=True)
class DropParams:
    """A smooth monotone curvature drop: depth mu (> 0), width w (> 0)."""

    mu: float
    w: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"drop depth mu must be > 0, got {self.mu}")
        if not self.w > 0:
            raise ValueError(f"drop width w must be > 0, got {self.w}")


def _isq_value(r, u):
    r = np.asarray(r, dtype=float)
    return 0.25 / (r + 1.0) ** 2 - u


class CurvatureSpec:
    """Immutable curvature function K(r); evaluation is pure and vectorized."""

    def __init__(self, kind, params):
        if kind not in _BUILTIN_KINDS:
            raise ValueError(f"unknown curvature kind {kind!r}")
        self.kind = kind
        self.params = dict(params)
        self._validate()
        self._blend = None
        if kind == "isq_capped":
            self._blend = self._make_blend()
        if kind == "table":
            r = np.asarray(self.params["r"], dtype=float)
            K = np.asarray(self.params["K"], dtype=float)
            self._interp = PchipInterpolator(r, K, extrapolate=False)
            self._table_r = r
            self._table_K = K

    def _validate(self):
        p = self.params
        if self.kind == "constant":
            p["k"] = float(p["k"])
        elif self.kind == "isq":
            u = float(p["u"])
            if not 0.0 <= u <= 0.25:
                raise ValueError(f"isq parameter u must be in [0, 1/4], got {u}")
            p["u"] = u
        elif self.kind == "isq_capped":
            u = float(p["u"])
            if not 0.0 < u <= 0.25:
                raise ValueError(f"isq_capped requires u in (0, 1/4], got {u}")
            eps = float(p["eps"])
            z = isq_zero(u)
            if not 0.0 < eps < z:
                raise ValueError(f"eps must be in (0, z) with z = {z:.6g}, got {eps}")
            p["u"], p["eps"] = u, eps
        elif self.kind == "spliced":
            base = p["base"]
            if not isinstance(base, CurvatureSpec):
                base = CurvatureSpec(base["kind"], base["params"])
            p["base"] = base
            p["r0"] = float(p["r0"])
            if p["r0"] < 0:
                raise ValueError("splice radius r0 must be >= 0")
            drop = p["drop"]
            if not isinstance(drop, DropParams):
                drop = DropParams(float(drop["mu"]), float(drop["w"]))
            p["drop"] = drop
        elif self.kind == "table":
            r = np.asarray(p["r"], dtype=float)
            K = np.asarray(p["K"], dtype=float)
            if r.ndim != 1 or r.shape != K.shape or len(r) < 2:
                raise ValueError("table needs matching 1-d r and K arrays, length >= 2")
            if not np.all(np.diff(r) > 0):
                raise ValueError("table radii must be strictly increasing")
            if not (np.all(np.isfinite(r)) and np.all(np.isfinite(K))):
                raise ValueError("table entries must be finite")
            p["r"] = [float(x) for x in r]
            p["K"] = [float(x) for x in K]
            p.setdefault("extrapolate", "none")
            if p["extrapolate"] not in ("none", "constant"):
                raise ValueError("table extrapolate must be 'none' or 'constant'")
        elif self.kind == "expression":
            if not callable(p.get("fn")):
                raise ValueError("expression kind needs a callable 'fn'")

    def _make_blend(self):
        # quintic Hermite joining K_u (value + two derivatives) at z-eps
        # to the flat zero function at z+eps
        u, eps = self.params["u"], self.params["eps"]
        z = isq_zero(u)
        a = z - eps
        s = a + 1.0
        va = 0.25 / s**2 - u
        da = -0.5 / s**3
        dda = 1.5 / s**4
        return BPoly.from_derivatives([a, z + eps], [[va, da, dda], [0.0, 0.0, 0.0]])

    # ------------------------------------------------------------------

    @property
    def domain_hi(self):
        """Upper end of the declared domain (inf for closed-form kinds)."""
        if self.kind == "table" and self.params["extrapolate"] == "none":
            return self.params["r"][-1]
        return math.inf

    def evaluate(self, r):
        """K(r); accepts scalars or arrays, r >= 0 required."""
        scalar = np.isscalar(r)
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r < 0):
            raise ValueError("curvature is defined for r >= 0 only")
        out = self._eval(r)
        return float(out[0]) if scalar else out

    def _eval(self, r):
        p = self.params
        if self.kind == "constant":
            return np.full_like(r, p["k"])
        if self.kind == "isq":
            return _isq_value(r, p["u"])
        if self.kind == "isq_capped":
            u, eps = p["u"], p["eps"]
            z = isq_zero(u)
            out = np.zeros_like(r)
            lo = r <= z - eps
            mid = (r > z - eps) & (r < z + eps)
            out[lo] = _isq_value(r[lo], u)
            if np.any(mid):
                out[mid] = self._blend(r[mid])
            return out
        if self.kind == "spliced":
            base = p["base"]._eval(r)
            drop = p["drop"]
            t = (r - p["r0"]) / drop.w
            return base - drop.mu * smoothstep(t)
        if self.kind == "table":
            if p["extrapolate"] == "constant":
                rc = np.clip(r, self._table_r[0], self._table_r[-1])
                return self._interp(rc)
            out = self._interp(r)
            if np.any(np.isnan(out)):
                bad = r[np.isnan(out)][0]
                raise OutOfWindow(
                    f"r = {bad:.6g} outside table range "
                    f"[{self._table_r[0]:.6g}, {self._table_r[-1]:.6g}]"
                )
            return out
        # expression
        fn = p["fn"]
        return np.asarray([float(fn(x)) for x in r])

    __call__ = evaluate

    # ------------------------------------------------------------------

    def constant_beyond(self):
        """(r_c, value) if K is exactly constant on [r_c, oo), else None."""
        p = self.params
        if self.kind == "constant":
            return 0.0, p["k"]
        if self.kind == "isq_capped":
            return isq_zero(p["u"]) + p["eps"], 0.0
        if self.kind == "spliced":
            base_cb = p["base"].constant_beyond()
            if base_cb is None:
                return None
            r_c, v = base_cb
            return max(r_c, p["r0"] + p["drop"].w), v - p["drop"].mu
        return None

    def tail_certificate(self):
        """What is certifiably known about K on a tail [r0, oo).

        Returns ("zero", r0), ("nonpositive", r0), ("positive_decreasing", 0.0)
        or None.  Used by the quadrature module to pick a tail strategy for
        improper integrals; None means only window-based estimates apply.
        """
        p = self.params
        cb = self.constant_beyond()
        if cb is not None:
            r_c, v = cb
            if v == 0.0:
                return ("zero", r_c)
            if v < 0.0:
                return ("nonpositive", r_c)
            return None
        if self.kind == "isq":
            u = p["u"]
            if u == 0.0:
                return ("positive_decreasing", 0.0)
            return ("nonpositive", isq_zero(u))
        if self.kind == "spliced":
            base_cert = p["base"].tail_certificate()
            r_full = p["r0"] + p["drop"].w
            if base_cert is not None and base_cert[0] in ("zero", "nonpositive"):
                return ("nonpositive", max(base_cert[1], r_full))
            # decreasing base: beyond the drop, K = base - mu <= base(r_full) - mu
            if base_cert is not None and base_cert[0] == "positive_decreasing":
                if p["base"].evaluate(r_full) <= p["drop"].mu:
                    return ("nonpositive", r_full)
            return None
        return None

    def blend_is_monotone(self, samples=256):
        """For isq_capped: check the smoothing blend is non-increasing and >= 0."""
        if self.kind != "isq_capped":
            return True
        u, eps = self.params["u"], self.params["eps"]
        z = isq_zero(u)
        x = np.linspace(z - eps, z + eps, samples)
        vals = self._blend(x)
        dvals = self._blend.derivative()(x)
        return bool(np.all(dvals <= VM_TOLERANCE) and np.all(vals >= -VM_TOLERANCE))

    # ------------------------------------------------------------------

    def to_dict(self):
        p = self.params
        if self.kind == "expression":
            raise ValueError("expression specs are opaque and not serializable")
        if self.kind == "spliced":
            drop = p["drop"]
            return {
                "kind": "spliced",
                "params": {
                    "base": p["base"].to_dict(),
                    "r0": p["r0"],
                    "drop": {"mu": drop.mu, "w": drop.w},
                },
            }
        return {"kind": self.kind, "params": dict(p)}

    @classmethod
    def from_dict(cls, d):
        kind = d["kind"]
        params = dict(d["params"])
        if kind == "spliced":
            params["base"] = cls.from_dict(params["base"])
        return cls(kind, params)

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, s):
        return cls.from_dict(json.loads(s))

    def __repr__(self):
        if self.kind == "expression":
            return "CurvatureSpec(expression)"
        return f"CurvatureSpec({self.to_dict()})"


# convenience constructors ------------------------------------------------


def constant(k):
    return CurvatureSpec("constant", {"k": k})


def isq(u):
    return CurvatureSpec("isq", {"u": u})


def isq_capped(u, eps):
    return CurvatureSpec("isq_capped", {"u": u, "eps": eps})


def spliced(base, r0, drop):
    return CurvatureSpec("spliced", {"base": base, "r0": r0, "drop": drop})


def table(r, K, extrapolate="none"):
    return CurvatureSpec("table", {"r": r, "K": K, "extrapolate": extrapolate})


def expression(fn):
    return CurvatureSpec("expression", {"fn": fn})


# ------------------------------------------------------------------------


@dataclass
class VMReport:
    is_vm: bool
    first_violation: float | None


def check_von_mangoldt(spec, r_max, grid_step=0.01):
    """Check that K is non-increasing on [0, r_max].

    Samples on a uniform grid, then refines 64x around any suspected
    increase; increases below VM_TOLERANCE per cell are ignored as
    roundoff.  Report-style result, never raises on a violation.
    """
    if not (r_max > 0 and grid_step > 0):
        raise ValueError("r_max and grid_step must be positive")
    hi = min(r_max, spec.domain_hi)
    n = max(int(hi / grid_step) + 1, 8)
    r = np.linspace(0.0, hi, n)
    K = spec.evaluate(r)
    rises = np.nonzero(np.diff(K) > VM_TOLERANCE)[0]
    if len(rises) == 0:
        return VMReport(True, None)
    i = rises[0]
    # refine to locate the first genuine increase
    rr = np.linspace(r[max(i - 1, 0)], r[min(i + 2, n - 1)], 256)
    KK = spec.evaluate(rr)
    jumps = np.nonzero(np.diff(KK) > VM_TOLERANCE)[0]
    if len(jumps) == 0:
        return VMReport(False, float(r[i]))
    return VMReport(False, float(rr[jumps[0]]))

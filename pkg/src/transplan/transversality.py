"""Locating where a path meets a hypersurface and certifying semi-transversality.

A path is semi-transversal to ``Z`` when every interior parameter ``t`` with
``path(t)`` on ``Z`` is a smooth point of the path whose velocity is not
tangent to ``Z``.  Numerically, "not tangent" means the normalised margin

    mu = |grad f . v| / (|grad f| |v|)

exceeds ``DetectionConfig.margin_tolerance``.

Intersections are found per segment and per component by sampling
``g(t) = f(path(t))`` on a uniform grid.  Sign changes are refined by
bisection.  Even-multiplicity zeros (touches) never change sign, so the
local minima of ``|g|`` are refined separately and kept when ``|g|`` gets
below ``on_surface_tolerance``.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionMismatch, OutOfDomain
from .geometry import PiecewisePath, Segment, path_derivative
from .hypersurface import HypersurfaceComponent, ImplicitHypersurface

STATIONARY_SPEED = 1e-12
DERIVATIVE_MATCH_RTOL = 1e-9
# a touch candidate is refined only if the cubic Hermite model of g on its
# bracket dips below this many on-surface tolerances
_TOUCH_PREFILTER = 1e3
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class EventKind(str, Enum):
    TRANSVERSAL = "transversal_crossing"
    TANGENTIAL = "tangential_touch"
    NONSMOOTH = "nonsmooth_hit"
    STATIONARY = "stationary_hit"


@dataclass(frozen=True)
class DetectionConfig:
    samples_per_segment: int = 1024
    bisection_tolerance: float = 1e-13
    on_surface_tolerance: float = 1e-9
    margin_tolerance: float = 1e-6
    breakpoint_window: float = 1e-9
    endpoint_window: float = 1e-9

    def __post_init__(self):
        if int(self.samples_per_segment) != self.samples_per_segment or self.samples_per_segment < 16:
            raise ValueError(f"samples_per_segment must be an integer >= 16, got {self.samples_per_segment}")
        for name in ("bisection_tolerance", "on_surface_tolerance", "margin_tolerance",
                     "breakpoint_window", "endpoint_window"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive, got {v}")


DEFAULT_CONFIG = DetectionConfig()


@dataclass(frozen=True, eq=False)
class CrossingEvent:
    t: float
    point: np.ndarray
    component: str
    margin: float
    kind: EventKind

    @property
    def is_transversal(self) -> bool:
        return self.kind is EventKind.TRANSVERSAL

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "point": [float(x) for x in self.point],
            "component": self.component,
            "margin": self.margin,
            "kind": self.kind.value,
        }


@dataclass(frozen=True)
class Verdict:
    events: tuple[CrossingEvent, ...] = field(default_factory=tuple)

    @property
    def violations(self) -> tuple[CrossingEvent, ...]:
        return tuple(e for e in self.events if not e.is_transversal)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def n_transversal(self) -> int:
        return sum(e.is_transversal for e in self.events)

    def to_dict(self) -> dict:
        return {"status": self.status, "events": [e.to_dict() for e in self.events]}


@lru_cache(maxsize=64)
def _grid(t_lo: float, t_hi: float, n: int) -> np.ndarray:
    ts = np.linspace(t_lo, t_hi, n)
    ts.flags.writeable = False
    return ts


def _check_dimension(path: PiecewisePath, surface: ImplicitHypersurface) -> None:
    if path.dimension != surface.dimension:
        raise DimensionMismatch(f"path lives in R^{path.dimension} but the surface in R^{surface.dimension}")


def _bisect(f, lo: float, hi: float, flo: float, fhi: float, tol: float) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return lo if abs(flo) <= abs(fhi) else hi


def _refine_root(f, lo: float, hi: float, tol: float) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        # the scalar and vectorised evaluations disagree in the last bit
        return lo if abs(flo) <= abs(fhi) else hi
    return brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps)


def _golden_min(f, lo: float, hi: float, tol: float) -> float:
    """Minimise a unimodal ``f`` on ``[lo, hi]`` by golden-section (ternary) search."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return c if fc <= fd else d


def _hermite_min_abs(h: float, g0: float, d0: float, g1: float, d1: float) -> float:
    """Least ``|H|`` over the cubic Hermite interpolant of ``g`` on one sample interval."""
    b = h * d0
    c = -3.0 * g0 - 2.0 * b + 3.0 * g1 - h * d1
    e = 2.0 * g0 + b - 2.0 * g1 + h * d1
    ss = [0.0, 1.0]
    # roots of H'(s) = b + 2c s + 3e s^2
    if abs(e) > 1e-300:
        disc = c * c - 3.0 * e * b
        if disc >= 0.0:
            r = math.sqrt(disc)
            ss += [(-c - r) / (3.0 * e), (-c + r) / (3.0 * e)]
    elif abs(c) > 1e-300:
        ss.append(-b / (2.0 * c))
    vals = [g0 + s * (b + s * (c + s * e)) for s in sorted(ss) if 0.0 <= s <= 1.0]
    if min(vals) <= 0.0 <= max(vals):
        return 0.0
    return min(abs(v) for v in vals)


def _scan_segment(seg: Segment, comp: HypersurfaceComponent, ts, pts, vel, cfg: DetectionConfig) -> list[float]:
    """Candidate parameters of intersections of one segment with one component."""

    def g(t):
        return comp.value_at(seg.point_at(t))

    def dg(t):
        return float(comp.gradient(seg.evaluate(t)) @ seg.derivative(t))

    gs = comp.value(pts)
    sg = np.sign(gs)
    zero = sg == 0.0
    change = sg[:-1] * sg[1:] < 0.0
    found = []

    for i in np.flatnonzero(change):
        # Brent keeps the sign-change bracket and falls back to bisection steps,
        # reaching the bracket tolerance in a handful of evaluations
        found.append(_refine_root(g, ts[i], ts[i + 1], cfg.bisection_tolerance))

    if zero.any():
        starts = zero & ~np.r_[False, zero[:-1]]
        found.extend(ts[i] for i in np.flatnonzero(starts))

    a = np.abs(gs)
    n = gs.size
    minima = ~zero
    minima[1:] &= a[1:] < a[:-1]
    minima[:-1] &= a[:-1] <= a[1:]
    blocked = change | zero[1:] | zero[:-1]
    minima[:-1] &= ~blocked
    minima[1:] &= ~blocked
    cand = np.flatnonzero(minima)
    if cand.size == 0:
        return found

    grad = comp.gradient(pts)
    dgs = sum(grad[:, k] * vel[:, k] for k in range(grad.shape[1]))
    h = ts[1] - ts[0]
    for i in cand:
        lo, hi = max(i - 1, 0), min(i + 1, n - 1)
        bound = _TOUCH_PREFILTER * cfg.on_surface_tolerance + 1e-3 * max(a[lo], a[hi])
        est = min(
            _hermite_min_abs(h, gs[j], dgs[j], gs[j + 1], dgs[j + 1]) for j in range(lo, hi)
        )
        if est > bound:
            continue
        if dgs[lo] * dgs[hi] <= 0.0 and dgs[lo] != dgs[hi]:
            # the extremum of g is where g' vanishes; bisecting g' pins it far
            # more sharply than comparing |g| values, which go flat near zero
            if dgs[lo] == 0.0:
                t = ts[lo]
            elif dgs[hi] == 0.0:
                t = ts[hi]
            else:
                t = _bisect(dg, ts[lo], ts[hi], dgs[lo], dgs[hi], cfg.bisection_tolerance)
        else:
            t = _golden_min(lambda s: abs(g(s)), ts[lo], ts[hi], cfg.bisection_tolerance)
        if abs(g(t)) < cfg.on_surface_tolerance:
            found.append(t)
    return found


def smooth_at(path: PiecewisePath, t: float, cfg: DetectionConfig = DEFAULT_CONFIG) -> bool:
    """Whether ``path`` is differentiable at interior parameter ``t``.

    Away from breakpoints a path is always smooth; at (or within
    ``cfg.breakpoint_window`` of) a breakpoint the one-sided velocities must
    agree to a relative error of 1e-9.
    """
    t = float(t)
    if not 0.0 < t < 1.0:
        raise OutOfDomain(f"smoothness is only tested at interior parameters, got t={t}")
    for b in path.interior_breakpoints:
        if abs(t - b) <= cfg.breakpoint_window:
            left = path_derivative(path, b, "left")
            right = path_derivative(path, b, "right")
            scale = max(np.linalg.norm(left), np.linalg.norm(right))
            return bool(np.linalg.norm(left - right) <= DERIVATIVE_MATCH_RTOL * scale)
    return True


def crossing_margin(gradient: np.ndarray, velocity: np.ndarray) -> float:
    gn = float(np.linalg.norm(gradient))
    vn = float(np.linalg.norm(velocity))
    if gn == 0.0 or vn < STATIONARY_SPEED:
        return 0.0
    return min(abs(float(gradient @ velocity)) / (gn * vn), 1.0)


def _classify(path, seg, comp, t, cfg) -> CrossingEvent:
    point = seg.evaluate(t)
    vel = seg.derivative(t)
    margin = crossing_margin(comp.gradient(point), vel)
    if not smooth_at(path, t, cfg):
        kind = EventKind.NONSMOOTH
    elif np.linalg.norm(vel) < STATIONARY_SPEED:
        kind = EventKind.STATIONARY
    elif margin <= cfg.margin_tolerance:
        kind = EventKind.TANGENTIAL
    else:
        kind = EventKind.TRANSVERSAL
    return CrossingEvent(float(t), point, comp.label, margin, kind)


def find_crossings(path: PiecewisePath, surface: ImplicitHypersurface,
                   cfg: DetectionConfig = DEFAULT_CONFIG) -> list[CrossingEvent]:
    """All interior parameters where ``path`` meets ``surface``, sorted by ``t``, each classified."""
    _check_dimension(path, surface)
    lo_t, hi_t = cfg.endpoint_window, 1.0 - cfg.endpoint_window
    raw = []
    for seg in path.segments:
        ts = _grid(seg.t_lo, seg.t_hi, cfg.samples_per_segment)
        pts = seg.evaluate(ts)
        vel = seg.derivative(ts)
        for ci, comp in enumerate(surface.components):
            for t in _scan_segment(seg, comp, ts, pts, vel, cfg):
                if lo_t <= t <= hi_t:
                    raw.append((float(t), ci, seg))
    raw.sort(key=lambda r: (r[0], r[1]))

    # one intersection can be seen from both segments sharing a breakpoint
    merge = max(cfg.breakpoint_window, 10.0 * cfg.bisection_tolerance)
    kept = []
    last_t: dict[int, float] = {}
    for t, ci, seg in raw:
        if ci in last_t and t - last_t[ci] <= merge:
            continue
        last_t[ci] = t
        kept.append((t, ci, seg))
    return [_classify(path, seg, surface.components[ci], t, cfg) for t, ci, seg in kept]


def certify_semi_transversal(path: PiecewisePath, surface: ImplicitHypersurface,
                             cfg: DetectionConfig = DEFAULT_CONFIG) -> Verdict:
    return Verdict(tuple(find_crossings(path, surface, cfg)))


def crossing_count_oracle(path: PiecewisePath, surface: ImplicitHypersurface,
                          dense_samples: int = 16384, endpoint_window: float = 1e-9) -> int:
    """Brute-force count of sign changes of ``f(path(t))`` on a dense grid.

    Independent of :func:`find_crossings`: no refinement, no classification,
    and blind to touches that do not change sign.
    """
    if dense_samples < 4096:
        raise ValueError(f"dense_samples must be at least 4096, got {dense_samples}")
    _check_dimension(path, surface)
    total = 0
    for seg in path.segments:
        ts = _grid(seg.t_lo, seg.t_hi, dense_samples)
        ts = ts[(ts > endpoint_window) & (ts < 1.0 - endpoint_window)]
        if ts.size < 2:
            continue
        pts = seg.evaluate(ts)
        for comp in surface.components:
            g = comp.value(pts)
            if (g == 0.0).any():
                s = np.sign(g)
                s = s[s != 0.0]
                total += int(np.count_nonzero(s[1:] != s[:-1]))
            else:
                neg = g < 0.0
                total += int(np.count_nonzero(neg[1:] != neg[:-1]))
    return total

"""Piecewise-smooth paths ``[0, 1] -> R^n`` with exact derivatives.

A path is an ordered tuple of segments tiling ``[0, 1]``.  Each segment is
written in a local parameter ``s = (t - t_lo) / (t_hi - t_lo)`` so that
reparameterising a segment onto a new interval (concatenation, reversal)
never touches its coefficients.

Evaluation is vectorised: passing a 1-D array of parameters returns an
``(m, n)`` array of points; a scalar parameter returns an ``(n,)`` point.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P

from .diffeo import Diffeomorphism, diffeo_from_dict
from .errors import DimensionMismatch, DiscontinuousJoin, InvalidPath, OutOfDomain

CONTINUITY_TOL = 1e-9

Side = Literal["left", "right"]


def stack_columns(cols, shape) -> np.ndarray:
    """Assemble per-coordinate arrays into an array with the coordinate axis last.

    The result is a view of a coordinate-major buffer, so ``p[..., k]`` stays
    contiguous; numpy broadcasting over a trailing axis of length 2 or 3 is
    several times slower than whole-column arithmetic.
    """
    out = np.empty((len(cols),) + tuple(shape))
    for k, c in enumerate(cols):
        out[k] = c
    return out.T if out.ndim <= 2 else np.moveaxis(out, 0, -1)


def as_point(coords) -> np.ndarray:
    """Validate and freeze a point (a finite 1-D float vector)."""
    p = np.array(coords, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise DimensionMismatch(f"a point must be a non-empty vector, got shape {p.shape}")
    if not np.isfinite(p).all():
        raise InvalidPath(f"point has non-finite coordinates: {p.tolist()}")
    p.flags.writeable = False
    return p


@dataclass(frozen=True, eq=False)
class Segment:
    t_lo: float
    t_hi: float

    def __post_init__(self):
        if not (0.0 <= self.t_lo < self.t_hi <= 1.0):
            raise InvalidPath(f"segment interval [{self.t_lo}, {self.t_hi}] is not a sub-interval of [0, 1]")

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    def local(self, t):
        return (np.asarray(t, dtype=float) - self.t_lo) / (self.t_hi - self.t_lo)

    def evaluate(self, t) -> np.ndarray:
        return self._local_eval(self.local(t))

    def derivative(self, t) -> np.ndarray:
        """Velocity with respect to the global parameter ``t``."""
        return self._local_deriv(self.local(t)) / (self.t_hi - self.t_lo)

    def point_at(self, t: float) -> tuple[float, ...]:
        """Scalar evaluation as plain floats; used inside root-refinement loops."""
        return tuple(self.evaluate(t).tolist())

    def with_interval(self, t_lo: float, t_hi: float) -> Segment:
        raise NotImplementedError

    def reversed(self) -> Segment:
        """The segment traced backwards on the mirrored interval ``[1 - t_hi, 1 - t_lo]``."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def _local_eval(self, s) -> np.ndarray:
        raise NotImplementedError

    def _local_deriv(self, s) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class LinearSegment(Segment):
    start: np.ndarray = field(default=None)  # type: ignore[assignment]
    end: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "start", as_point(self.start))
        object.__setattr__(self, "end", as_point(self.end))
        if self.start.shape != self.end.shape:
            raise DimensionMismatch("linear segment endpoints differ in dimension")
        object.__setattr__(self, "_ab", tuple(zip(self.start.tolist(), self.end.tolist())))

    @property
    def dimension(self) -> int:
        return self.start.size

    def _local_eval(self, s):
        r = 1.0 - s
        # (1 - s) a + s b hits both endpoints exactly
        # equal coordinates stay exactly constant
        return stack_columns([a if a == b else r * a + s * b for a, b in self._ab], np.shape(s))

    def _local_deriv(self, s):
        return stack_columns([b - a for a, b in self._ab], np.shape(s))

    def point_at(self, t):
        s = (t - self.t_lo) / (self.t_hi - self.t_lo)
        r = 1.0 - s
        return tuple(a if a == b else r * a + s * b for a, b in self._ab)

    def with_interval(self, t_lo, t_hi):
        return LinearSegment(t_lo, t_hi, self.start, self.end)

    def reversed(self):
        return LinearSegment(1.0 - self.t_hi, 1.0 - self.t_lo, self.end, self.start)

    def to_dict(self):
        return {"kind": "linear", "start": self.start.tolist(), "end": self.end.tolist()}


@dataclass(frozen=True, eq=False)
class PolynomialSegment(Segment):
    """Coordinate ``k`` is ``sum(coefficients[k][j] * s**j)`` in the local parameter."""

    coefficients: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        super().__post_init__()
        try:
            c = np.array(self.coefficients, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidPath(f"polynomial coefficients must be a rectangular numeric table: {exc}") from exc
        if c.ndim != 2 or c.shape[0] == 0 or c.shape[1] == 0:
            raise InvalidPath(f"polynomial coefficients must be an (n, degree+1) table, got shape {c.shape}")
        if not np.isfinite(c).all():
            raise InvalidPath("polynomial coefficients must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @property
    def dimension(self) -> int:
        return self.coefficients.shape[0]

    def _local_eval(self, s):
        # polyval with a 2-D table puts the coordinate axis first
        return np.moveaxis(P.polyval(s, self.coefficients.T, tensor=True), 0, -1)

    def _local_deriv(self, s):
        d = P.polyder(self.coefficients.T, axis=0) if self.coefficients.shape[1] > 1 else np.zeros((1, self.dimension))
        return np.moveaxis(P.polyval(s, d, tensor=True), 0, -1)

    def with_interval(self, t_lo, t_hi):
        return PolynomialSegment(t_lo, t_hi, self.coefficients)

    def reversed(self):
        flip = Polynomial([1.0, -1.0])
        rows = []
        for row in self.coefficients:
            c = Polynomial(row)(flip).coef
            rows.append(np.pad(c, (0, self.coefficients.shape[1] - c.size)))
        return PolynomialSegment(1.0 - self.t_hi, 1.0 - self.t_lo, np.array(rows))

    def to_dict(self):
        return {"kind": "polynomial", "coefficients": self.coefficients.tolist()}


@dataclass(frozen=True, eq=False)
class MappedSegment(Segment):
    """``transform.forward`` applied pointwise to an inner segment on the same interval."""

    inner: Segment = field(default=None)  # type: ignore[assignment]
    transform: Diffeomorphism = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        super().__post_init__()
        if (self.inner.t_lo, self.inner.t_hi) != (self.t_lo, self.t_hi):
            raise InvalidPath("mapped segment must share its inner segment's interval")
        if self.inner.dimension != self.transform.dimension:
            raise DimensionMismatch(
                f"map of dimension {self.transform.dimension} applied to a segment of dimension {self.inner.dimension}"
            )

    @property
    def dimension(self) -> int:
        return self.inner.dimension

    def evaluate(self, t):
        return self.transform.forward(self.inner.evaluate(t))

    def point_at(self, t):
        return self.transform.forward_point(self.inner.point_at(t))

    def derivative(self, t):
        # chain rule: d/dt F(inner(t)) = DF_{inner(t)} inner'(t)
        return self.transform.pushforward(self.inner.evaluate(t), self.inner.derivative(t))

    def with_interval(self, t_lo, t_hi):
        return MappedSegment(t_lo, t_hi, self.inner.with_interval(t_lo, t_hi), self.transform)

    def reversed(self):
        inner = self.inner.reversed()
        return MappedSegment(inner.t_lo, inner.t_hi, inner, self.transform)

    def to_dict(self):
        return {"kind": "mapped", "map": self.transform.to_dict(), "inner": self.inner.to_dict()}


class PiecewisePath:
    """A continuous path made of segments that tile ``[0, 1]``."""

    __slots__ = ("segments", "breakpoints")

    def __init__(self, segments):
        segments = tuple(segments)
        if not segments:
            raise InvalidPath("a path needs at least one segment")
        dim = segments[0].dimension
        if any(s.dimension != dim for s in segments):
            raise DimensionMismatch("path segments differ in dimension")
        if segments[0].t_lo != 0.0 or segments[-1].t_hi != 1.0:
            raise InvalidPath("segments must start at t=0 and end at t=1")
        for left, right in zip(segments, segments[1:]):
            if left.t_hi != right.t_lo:
                raise InvalidPath(f"segments do not tile [0, 1]: gap or overlap at t={left.t_hi}")
            gap = math.dist(left.point_at(left.t_hi), right.point_at(right.t_lo))
            if gap > CONTINUITY_TOL:
                raise InvalidPath(f"path is discontinuous at t={left.t_hi} (jump {gap:.3g})")
        self.segments = segments
        self.breakpoints = tuple([0.0] + [s.t_hi for s in segments])

    @property
    def dimension(self) -> int:
        return self.segments[0].dimension

    @property
    def interior_breakpoints(self) -> tuple[float, ...]:
        return self.breakpoints[1:-1]

    def segment_index(self, t: float, side: Side = "right") -> int:
        """Index of the segment that owns ``t``; at a breakpoint ``side`` chooses."""
        if side == "right":
            i = bisect.bisect_right(self.breakpoints, t) - 1
        else:
            i = bisect.bisect_left(self.breakpoints, t) - 1
        return min(max(i, 0), len(self.segments) - 1)

    def __call__(self, t) -> np.ndarray:
        return eval_path(self, t)

    def sample(self, ts) -> np.ndarray:
        """Evaluate at an array of parameters, using the right segment at breakpoints."""
        ts = np.asarray(ts, dtype=float)
        if ts.size and (ts.min() < 0.0 or ts.max() > 1.0):
            raise OutOfDomain("sample parameters must lie in [0, 1]")
        idx = np.clip(np.searchsorted(self.breakpoints, ts, side="right") - 1, 0, len(self.segments) - 1)
        out = np.empty(ts.shape + (self.dimension,))
        for i, seg in enumerate(self.segments):
            mask = idx == i
            if mask.any():
                out[mask] = seg.evaluate(ts[mask])
        return out

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "breakpoints": list(self.breakpoints),
            "segments": [s.to_dict() for s in self.segments],
        }

    def __repr__(self) -> str:
        return f"PiecewisePath(dimension={self.dimension}, breakpoints={self.breakpoints})"


def _check_t(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise OutOfDomain(f"path parameter {t} is outside [0, 1]")
    return t


def eval_path(path: PiecewisePath, t: float) -> np.ndarray:
    t = _check_t(t)
    return path.segments[path.segment_index(t, "right")].evaluate(t)


def path_derivative(path: PiecewisePath, t: float, side: Side = "right") -> np.ndarray:
    """One-sided velocity of ``path`` at ``t``."""
    t = _check_t(t)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if (side == "left" and t == 0.0) or (side == "right" and t == 1.0):
        raise OutOfDomain(f"no {side} derivative at t={t}")
    return path.segments[path.segment_index(t, side)].derivative(t)


def linear_path(start, end) -> PiecewisePath:
    return PiecewisePath([LinearSegment(0.0, 1.0, start, end)])


def constant_path(p) -> PiecewisePath:
    return linear_path(p, p)


def polyline_path(*points) -> PiecewisePath:
    """Equal-duration linear legs through ``points``; branches read ``(k - j t)``-style."""
    k = len(points) - 1
    if k < 1:
        raise InvalidPath("a polyline needs at least two points")
    bps = [i / k for i in range(k)] + [1.0]
    return PiecewisePath([LinearSegment(bps[i], bps[i + 1], points[i], points[i + 1]) for i in range(k)])


def concat(first: PiecewisePath, second: PiecewisePath) -> PiecewisePath:
    """Traverse ``first`` on ``[0, 1/2]`` then ``second`` on ``[1/2, 1]``."""
    if first.dimension != second.dimension:
        raise DimensionMismatch("cannot concatenate paths of different dimension")
    gap = float(np.linalg.norm(eval_path(first, 1.0) - eval_path(second, 0.0)))
    if gap > CONTINUITY_TOL:
        raise DiscontinuousJoin(f"first path ends {gap:.3g} away from where the second starts")
    segs = [s.with_interval(0.5 * s.t_lo, 0.5 * s.t_hi) for s in first.segments]
    segs += [s.with_interval(0.5 + 0.5 * s.t_lo, 0.5 + 0.5 * s.t_hi) for s in second.segments]
    return PiecewisePath(segs)


def reverse(path: PiecewisePath) -> PiecewisePath:
    return PiecewisePath([s.reversed() for s in reversed(path.segments)])


def map_path(transform: Diffeomorphism, path: PiecewisePath) -> PiecewisePath:
    """Compose ``transform.forward`` after ``path``, segment by segment."""
    if transform.dimension != path.dimension:
        raise DimensionMismatch(
            f"map of dimension {transform.dimension} applied to a path of dimension {path.dimension}"
        )
    return PiecewisePath([MappedSegment(s.t_lo, s.t_hi, s, transform) for s in path.segments])


def _segment_from_dict(doc: dict, t_lo: float, t_hi: float) -> Segment:
    kind = doc.get("kind")
    if kind == "linear":
        return LinearSegment(t_lo, t_hi, doc["start"], doc["end"])
    if kind == "polynomial":
        return PolynomialSegment(t_lo, t_hi, doc["coefficients"])
    if kind == "mapped":
        return MappedSegment(t_lo, t_hi, _segment_from_dict(doc["inner"], t_lo, t_hi), diffeo_from_dict(doc["map"]))
    raise InvalidPath(f"unknown segment kind {kind!r}")


def path_from_dict(doc: dict) -> PiecewisePath:
    """Inverse of :meth:`PiecewisePath.to_dict`; raises :class:`InvalidPath` on bad input."""
    try:
        bps = [float(b) for b in doc["breakpoints"]]
        seg_docs = doc["segments"]
        dimension = int(doc["dimension"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidPath(f"path document is missing or has a malformed field: {exc}") from exc
    if len(bps) != len(seg_docs) + 1:
        raise InvalidPath(f"{len(seg_docs)} segments need {len(seg_docs) + 1} breakpoints, got {len(bps)}")
    if any(b >= c for b, c in zip(bps, bps[1:])):
        raise InvalidPath(f"breakpoints must be strictly increasing, got {bps}")
    try:
        segs = [_segment_from_dict(d, lo, hi) for d, lo, hi in zip(seg_docs, bps, bps[1:])]
    except (KeyError, TypeError) as exc:
        raise InvalidPath(f"malformed segment: missing field {exc}") from exc
    path = PiecewisePath(segs)
    if path.dimension != dimension:
        raise DimensionMismatch(f"path declares dimension {dimension} but its segments have {path.dimension}")
    return path

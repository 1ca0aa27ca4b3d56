"""Figures and polyline exports for planned paths.

Uses matplotlib's object API (no pyplot state).  SVG output is
byte-for-byte reproducible: the id hash salt is fixed, glyphs are written
as paths and the date metadata is dropped.
"""

from __future__ import annotations

import io

import matplotlib
import numpy as np
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from .geometry import PiecewisePath
from .hypersurface import ImplicitHypersurface, Sphere
from .transversality import EventKind, Verdict

POLYLINE_SAMPLES = 129
_GRID = 401
_SVG_RC = {"svg.hashsalt": "transplan", "svg.fonttype": "path", "path.simplify": False}
_MARKERS = {
    EventKind.TRANSVERSAL: ("o", "tab:green"),
    EventKind.TANGENTIAL: ("x", "tab:red"),
    EventKind.NONSMOOTH: ("s", "tab:red"),
    EventKind.STATIONARY: ("D", "tab:red"),
}


def polyline(path: PiecewisePath, n: int = POLYLINE_SAMPLES) -> tuple[np.ndarray, np.ndarray]:
    ts = np.linspace(0.0, 1.0, n)
    return ts, path.sample(ts)


def polyline_csv(path: PiecewisePath, n: int = POLYLINE_SAMPLES) -> str:
    """Rows ``t,x1,...,xn`` with 17 significant digits."""
    ts, pts = polyline(path, n)
    head = ",".join(["t"] + [f"x{k + 1}" for k in range(path.dimension)])
    rows = [",".join(format(float(v), ".17g") for v in (t, *p)) for t, p in zip(ts, pts)]
    return "\n".join([head, *rows]) + "\n"


def _view(pts: np.ndarray, surface: ImplicitHypersurface) -> tuple[float, float, float, float]:
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    for c in surface:
        if isinstance(c, Sphere):
            lo = np.minimum(lo, c.center - c.radius)
            hi = np.maximum(hi, c.center + c.radius)
    pad = 0.1 * float(np.max(hi - lo)) + 0.5
    return lo[0] - pad, hi[0] + pad, lo[1] - pad, hi[1] + pad


def path_figure(path: PiecewisePath, surface: ImplicitHypersurface, verdict: Verdict | None = None,
                title: str | None = None) -> Figure:
    """The surface (as zero contours), the sampled path and its crossing markers."""
    if path.dimension != 2:
        raise ValueError(f"figures are drawn for planar scenes only, got dimension {path.dimension}")
    _, pts = polyline(path)
    x0, x1, y0, y1 = _view(pts, surface)
    fig = Figure(figsize=(5.0, 5.0))
    ax = fig.add_subplot()
    gx, gy = np.meshgrid(np.linspace(x0, x1, _GRID), np.linspace(y0, y1, _GRID))
    grid = np.stack([gx, gy], axis=-1)
    for c in surface:
        ax.contour(gx, gy, c.value(grid), levels=[0.0], colors="tab:blue", linewidths=1.2)
    ax.plot(pts[:, 0], pts[:, 1], color="black", linewidth=1.0)
    ax.plot(*pts[0], marker="o", color="black", markersize=4)
    ax.plot(*pts[-1], marker="^", color="black", markersize=5)
    if verdict is not None:
        for e in verdict.events:
            marker, color = _MARKERS[e.kind]
            ax.plot(e.point[0], e.point[1], marker=marker, color=color, markersize=6, linestyle="none")
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    return fig


def histogram_figure(histogram: dict[int, int], title: str | None = None) -> Figure:
    """Bar chart of how many queries had each transversal-crossing count."""
    keys = sorted(histogram)
    fig = Figure(figsize=(5.0, 3.5))
    ax = fig.add_subplot()
    ax.bar([str(k) for k in keys], [histogram[k] for k in keys], color="tab:blue")
    ax.set_xlabel("transversal crossings")
    ax.set_ylabel("queries")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return fig


def svg_bytes(fig: Figure) -> bytes:
    buf = io.BytesIO()
    with matplotlib.rc_context(_SVG_RC):
        FigureCanvasSVG(fig).print_svg(buf, metadata={"Date": None})
    return buf.getvalue()

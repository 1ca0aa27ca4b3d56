"""Codimension-1 submanifolds given as disjoint unions of regular level sets."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, SceneError


def _columns(cols, shape) -> np.ndarray:
    out = np.empty((len(cols),) + tuple(shape))
    for k, c in enumerate(cols):
        out[k] = c
    return out.T if out.ndim <= 2 else np.moveaxis(out, 0, -1)


def _points(p, dimension: int) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.shape[-1:] != (dimension,):
        raise DimensionMismatch(f"expected points of dimension {dimension}, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class HypersurfaceComponent:
    """One connected piece ``{p : f(p) = 0}`` of a hypersurface.

    ``value`` and ``gradient`` accept a single point or an array of points
    with the coordinate axis last.
    """

    label: str

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    def value(self, p) -> np.ndarray:
        return self._value(_points(p, self.dimension))

    def gradient(self, p) -> np.ndarray:
        return self._gradient(_points(p, self.dimension))

    def value_at(self, p: tuple[float, ...]) -> float:
        """``value`` of a single point given as plain floats."""
        return float(self.value(p))

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Hyperplane(HypersurfaceComponent):
    normal: np.ndarray = field(default=None)  # type: ignore[assignment]
    offset: float = 0.0

    def __post_init__(self):
        n = np.array(self.normal, dtype=float)
        if n.ndim != 1 or not np.isfinite(n).all() or not np.any(n):
            raise ValueError(f"hyperplane normal must be a finite nonzero vector, got {self.normal!r}")
        n.flags.writeable = False
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "_n", tuple(n.tolist()))

    @property
    def dimension(self) -> int:
        return self.normal.size

    def _value(self, p):
        acc = np.full(p.shape[:-1], -self.offset)
        for k, a in enumerate(self._n):
            if a:
                acc += a * p[..., k]
        return acc

    def value_at(self, p):
        return sum(a * x for a, x in zip(self._n, p)) - self.offset

    def _gradient(self, p):
        return _columns(list(self._n), p.shape[:-1])

    def to_dict(self):
        return {"kind": "hyperplane", "label": self.label, "normal": self.normal.tolist(), "offset": self.offset}


@dataclass(frozen=True, eq=False)
class Sphere(HypersurfaceComponent):
    """Squared-distance form ``|p - c|**2 - r**2``, smooth through the centre."""

    center: np.ndarray = field(default=None)  # type: ignore[assignment]
    radius: float = 1.0

    def __post_init__(self):
        c = np.array(self.center, dtype=float)
        if c.ndim != 1 or not np.isfinite(c).all():
            raise ValueError(f"sphere center must be a finite vector, got {self.center!r}")
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"sphere radius must be positive, got {self.radius!r}")
        c.flags.writeable = False
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "_c", tuple(c.tolist()))

    @property
    def dimension(self) -> int:
        return self.center.size

    def _value(self, p):
        acc = np.full(p.shape[:-1], -self.radius**2)
        for k, c in enumerate(self._c):
            d = p[..., k] - c
            acc += d * d
        return acc

    def value_at(self, p):
        return sum((x - c) * (x - c) for x, c in zip(p, self._c)) - self.radius**2

    def _gradient(self, p):
        return _columns([2.0 * (p[..., k] - c) for k, c in enumerate(self._c)], p.shape[:-1])

    def to_dict(self):
        return {"kind": "sphere", "label": self.label, "center": self.center.tolist(), "radius": self.radius}


@dataclass(frozen=True, eq=False)
class Parabola(HypersurfaceComponent):
    """``y - x**2`` in the plane."""

    @property
    def dimension(self) -> int:
        return 2

    def _value(self, p):
        x = p[..., 0]
        return p[..., 1] - x * x

    def value_at(self, p):
        return p[1] - p[0] * p[0]

    def _gradient(self, p):
        return _columns([-2.0 * p[..., 0], 1.0], p.shape[:-1])

    def to_dict(self):
        return {"kind": "parabola", "label": self.label}


@dataclass(frozen=True, eq=False)
class DiagonalLine(HypersurfaceComponent):
    """``x - y`` in the plane."""

    @property
    def dimension(self) -> int:
        return 2

    def _value(self, p):
        return p[..., 0] - p[..., 1]

    def value_at(self, p):
        return p[0] - p[1]

    def _gradient(self, p):
        return _columns([1.0, -1.0], p.shape[:-1])

    def to_dict(self):
        return {"kind": "diagonal", "label": self.label}


class ImplicitHypersurface:
    """A disjoint union of components sharing one ambient dimension.

    Disjointness is the caller's responsibility; it is not checked.
    """

    __slots__ = ("components",)

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise ValueError("a hypersurface needs at least one component")
        dims = {c.dimension for c in components}
        if len(dims) != 1:
            raise DimensionMismatch(f"components have differing dimensions {sorted(dims)}")
        labels = [c.label for c in components]
        if len(set(labels)) != len(labels):
            raise ValueError(f"component labels must be unique, got {labels}")
        self.components = components

    @property
    def dimension(self) -> int:
        return self.components[0].dimension

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def component(self, label: str) -> HypersurfaceComponent:
        for c in self.components:
            if c.label == label:
                return c
        raise KeyError(label)

    def to_list(self) -> list[dict]:
        return [c.to_dict() for c in self.components]

    def __repr__(self):
        return f"ImplicitHypersurface({[c.label for c in self.components]})"


def value(component: HypersurfaceComponent, p) -> float:
    return float(component.value(p))


def gradient(component: HypersurfaceComponent, p) -> np.ndarray:
    return component.gradient(p)


def nearest_component_value(surface: ImplicitHypersurface, p) -> tuple[str, float]:
    """The component with least ``|f(p)|``; the first listed wins ties."""
    best = None
    for c in surface.components:
        v = float(c.value(p))
        if best is None or abs(v) < abs(best[1]):
            best = (c.label, v)
    return best


# built-in scenes' surfaces


def horizontal_hyperplane(n: int) -> ImplicitHypersurface:
    """``R^{n-1} x {0}`` inside ``R^n``."""
    normal = np.zeros(n)
    normal[-1] = 1.0
    return ImplicitHypersurface([Hyperplane("W", normal, 0.0)])


def concentric_spheres(d: int, radii=(1.0, 2.0)) -> ImplicitHypersurface:
    """Spheres ``S^d`` of the given radii about the origin of ``R^{d+1}``."""
    return ImplicitHypersurface(
        [Sphere(f"S{i + 1}", np.zeros(d + 1), r) for i, r in enumerate(radii)]
    )


def two_circles() -> ImplicitHypersurface:
    """Unit circles about ``(-2, 0)`` and ``(2, 0)``."""
    return ImplicitHypersurface([Sphere("S1", [-2.0, 0.0], 1.0), Sphere("S2", [2.0, 0.0], 1.0)])


def unit_circle() -> ImplicitHypersurface:
    return ImplicitHypersurface([Sphere("S", [0.0, 0.0], 1.0)])


def parabola() -> ImplicitHypersurface:
    return ImplicitHypersurface([Parabola("Z")])


def diagonal() -> ImplicitHypersurface:
    return ImplicitHypersurface([DiagonalLine("Z")])


def component_from_dict(doc: dict, default_label: str) -> HypersurfaceComponent:
    kind = doc.get("kind")
    label = str(doc.get("label", default_label))
    try:
        if kind == "hyperplane":
            return Hyperplane(label, doc["normal"], doc.get("offset", 0.0))
        if kind == "sphere":
            return Sphere(label, doc["center"], doc["radius"])
        if kind == "parabola":
            return Parabola(label)
        if kind == "diagonal":
            return DiagonalLine(label)
    except KeyError as exc:
        raise SceneError(f"surface component {label!r} ({kind}) is missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise SceneError(f"surface component {label!r} ({kind}): {exc}") from exc
    raise SceneError(f"surface component {label!r} has unknown kind {kind!r}")


def surface_from_list(docs) -> ImplicitHypersurface:
    if not isinstance(docs, list) or not docs:
        raise SceneError("'surface' must be a non-empty list of components")
    try:
        return ImplicitHypersurface([component_from_dict(d, f"Z{i + 1}") for i, d in enumerate(docs)])
    except (DimensionMismatch, ValueError) as exc:
        if isinstance(exc, SceneError):
            raise
        raise SceneError(f"'surface': {exc}") from exc

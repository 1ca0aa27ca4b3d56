"""Closed-form diffeomorphisms of R^n used to transport planners.

Every map is vectorised over leading axes: a point array of shape
``(..., n)`` is mapped to an array of the same shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionMismatch

Direction = Literal["forward", "inverse"]


def _as_points(p, dimension: int) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.shape[-1:] != (dimension,):
        raise DimensionMismatch(f"expected points of dimension {dimension}, got shape {arr.shape}")
    return arr


def _columns(cols) -> np.ndarray:
    # coordinate-major buffer viewed with the coordinate axis last
    out = np.empty((len(cols),) + np.shape(cols[0]))
    for k, c in enumerate(cols):
        out[k] = c
    return out.T if out.ndim <= 2 else np.moveaxis(out, 0, -1)


class Diffeomorphism:
    """A smooth bijection with smooth inverse and closed-form Jacobians."""

    dimension: int

    def forward(self, p) -> np.ndarray:
        return self._forward(_as_points(p, self.dimension))

    def inverse(self, p) -> np.ndarray:
        return self._inverse(_as_points(p, self.dimension))

    def forward_point(self, p: tuple[float, ...]) -> tuple[float, ...]:
        """``forward`` on a single point given as plain floats."""
        return tuple(self.forward(p).tolist())

    def inverse_point(self, p: tuple[float, ...]) -> tuple[float, ...]:
        return tuple(self.inverse(p).tolist())

    def pushforward(self, p, v, direction: Direction = "forward") -> np.ndarray:
        """Apply the Jacobian of the chosen map, taken at base point ``p``, to ``v``."""
        p = _as_points(p, self.dimension)
        v = _as_points(v, self.dimension)
        if direction == "forward":
            return self._push_forward(p, v)
        if direction == "inverse":
            return self._push_inverse(p, v)
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")

    def inverted(self) -> Diffeomorphism:
        """The diffeomorphism whose forward map is this one's inverse."""
        return Inverted(self)

    def to_dict(self) -> dict:
        raise NotImplementedError

    def _forward(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _inverse(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _push_forward(self, p: np.ndarray, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _push_inverse(self, p: np.ndarray, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(Diffeomorphism):
    dimension: int = 2

    def _forward(self, p):
        return p.copy()

    _inverse = _forward

    def _push_forward(self, p, v):
        return v.copy()

    _push_inverse = _push_forward

    def forward_point(self, p):
        return p

    inverse_point = forward_point

    def inverted(self) -> Diffeomorphism:
        return self

    def to_dict(self) -> dict:
        return {"kind": "identity", "dimension": self.dimension}


@dataclass(frozen=True)
class VerticalShear(Diffeomorphism):
    """``(x, y) -> (x, y - x**2)``; its inverse is ``(a, b) -> (a, a**2 + b)``.

    Pulls the parabola ``y = x**2`` back onto the horizontal axis.
    """

    dimension: int = 2

    def __post_init__(self):
        if self.dimension != 2:
            raise DimensionMismatch("VerticalShear is only defined on R^2")

    def _forward(self, p):
        x, y = p[..., 0], p[..., 1]
        return _columns([x, y - x * x])

    def _inverse(self, p):
        a, b = p[..., 0], p[..., 1]
        return _columns([a, a * a + b])

    def forward_point(self, p):
        x, y = p
        return (x, y - x * x)

    def inverse_point(self, p):
        a, b = p
        return (a, a * a + b)

    def _push_forward(self, p, v):
        # Jacobian [[1, 0], [-2x, 1]]
        return _columns([v[..., 0], v[..., 1] - 2.0 * p[..., 0] * v[..., 0]])

    def _push_inverse(self, p, v):
        # Jacobian [[1, 0], [2a, 1]]
        return _columns([v[..., 0], v[..., 1] + 2.0 * p[..., 0] * v[..., 0]])

    def to_dict(self) -> dict:
        return {"kind": "vertical_shear"}


@dataclass(frozen=True)
class Inverted(Diffeomorphism):
    base: Diffeomorphism

    @property
    def dimension(self) -> int:  # type: ignore[override]
        return self.base.dimension

    def _forward(self, p):
        return self.base._inverse(p)

    def _inverse(self, p):
        return self.base._forward(p)

    def _push_forward(self, p, v):
        return self.base._push_inverse(p, v)

    def forward_point(self, p):
        return self.base.inverse_point(p)

    def inverse_point(self, p):
        return self.base.forward_point(p)

    def _push_inverse(self, p, v):
        return self.base._push_forward(p, v)

    def inverted(self) -> Diffeomorphism:
        return self.base

    def to_dict(self) -> dict:
        return {"kind": "inverse", "of": self.base.to_dict()}


@dataclass(frozen=True)
class Composite(Diffeomorphism):
    """``outer ∘ inner``."""

    outer: Diffeomorphism
    inner: Diffeomorphism

    def __post_init__(self):
        if self.outer.dimension != self.inner.dimension:
            raise DimensionMismatch(
                f"cannot compose maps of dimension {self.outer.dimension} and {self.inner.dimension}"
            )

    @property
    def dimension(self) -> int:  # type: ignore[override]
        return self.inner.dimension

    def _forward(self, p):
        return self.outer._forward(self.inner._forward(p))

    def _inverse(self, p):
        return self.inner._inverse(self.outer._inverse(p))

    def _push_forward(self, p, v):
        return self.outer._push_forward(self.inner._forward(p), self.inner._push_forward(p, v))

    def _push_inverse(self, p, v):
        q = self.outer._inverse(p)
        return self.inner._push_inverse(q, self.outer._push_inverse(p, v))

    def to_dict(self) -> dict:
        return {"kind": "composite", "outer": self.outer.to_dict(), "inner": self.inner.to_dict()}


def diffeo_from_dict(doc: dict) -> Diffeomorphism:
    kind = doc.get("kind")
    if kind == "identity":
        return Identity(int(doc.get("dimension", 2)))
    if kind == "vertical_shear":
        return VerticalShear()
    if kind == "inverse":
        return Inverted(diffeo_from_dict(doc["of"]))
    if kind == "composite":
        return Composite(diffeo_from_dict(doc["outer"]), diffeo_from_dict(doc["inner"]))
    raise ValueError(f"unknown diffeomorphism kind {kind!r}")

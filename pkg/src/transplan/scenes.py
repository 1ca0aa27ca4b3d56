"""Scene files: an ambient dimension, a hypersurface and a planner selector.

A scene is a JSON object::

    {"dimension": 2,
     "surface": [{"kind": "sphere", "label": "S1", "center": [-2, 0], "radius": 1}, ...],
     "planner": "two_circles",
     "diffeo": {"kind": "vertical_shear"}}

``planner`` is a name or an object ``{"kind": name, ...}``.  When ``diffeo``
is present the named planner is transported through it, so the planner's
native surface is the image of the scene surface under the map.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .diffeo import Diffeomorphism, diffeo_from_dict
from .errors import DimensionMismatch, SceneError
from .hypersurface import Hyperplane, ImplicitHypersurface, Parabola, Sphere, surface_from_list
from .planners import (Planner, concentric_spheres_planner, diffeo_transport, hyperplane_planner,
                       parabola_planner, planner_from_contraction, straight_line_planner,
                       tcat_two_circles_contractions, two_circles_planner)

PLANNER_KINDS = ("hyperplane", "spheres", "two_circles", "parabola", "straight_line", "from_contraction")


def _is_horizontal_hyperplane(surface: ImplicitHypersurface) -> bool:
    if len(surface) != 1 or not isinstance(surface.components[0], Hyperplane):
        return False
    c = surface.components[0]
    return c.offset == 0.0 and not np.any(c.normal[:-1]) and c.normal[-1] != 0.0


def _origin_sphere_radii(surface: ImplicitHypersurface) -> tuple[float, ...] | None:
    if not all(isinstance(c, Sphere) and not np.any(c.center) for c in surface):
        return None
    return tuple(c.radius for c in surface)


def _is_two_circles(surface: ImplicitHypersurface) -> bool:
    if surface.dimension != 2 or len(surface) != 2 or not all(isinstance(c, Sphere) for c in surface):
        return False
    found = sorted((tuple(c.center.tolist()), c.radius) for c in surface)
    return found == [((-2.0, 0.0), 1.0), ((2.0, 0.0), 1.0)]


def _selector(doc) -> tuple[str, dict]:
    if isinstance(doc, str):
        return doc, {}
    if isinstance(doc, dict) and isinstance(doc.get("kind"), str):
        return doc["kind"], {k: v for k, v in doc.items() if k != "kind"}
    raise SceneError("'planner' must be a name or an object with a string 'kind'")


@dataclass(frozen=True, eq=False)
class Scene:
    dimension: int
    surface: ImplicitHypersurface
    planner_kind: str
    planner_params: dict
    diffeo: Diffeomorphism | None = None

    def build_planner(self) -> Planner:
        kind, params, n = self.planner_kind, self.planner_params, self.dimension
        # with a diffeo, compatibility is the transported planner's business
        native = self.diffeo is None
        if kind == "hyperplane":
            if native and not _is_horizontal_hyperplane(self.surface):
                raise SceneError("'planner': hyperplane needs the surface x_n = 0 as its only component")
            base = hyperplane_planner(n)
        elif kind == "spheres":
            radii = _origin_sphere_radii(self.surface)
            if native and radii is None:
                raise SceneError("'planner': spheres needs every surface component to be an origin-centred sphere")
            base = concentric_spheres_planner(n - 1, radii or (1.0, 2.0))
        elif kind in ("two_circles", "from_contraction"):
            if n != 2 or (native and not _is_two_circles(self.surface)):
                raise SceneError(f"'planner': {kind} needs the two unit circles about (-2, 0) and (2, 0)")
            if kind == "two_circles":
                base = two_circles_planner()
            else:
                which = params.get("which")
                if which not in (1, 2):
                    raise SceneError("'planner.which' must be 1 or 2")
                base = planner_from_contraction(tcat_two_circles_contractions()[which - 1], self.surface)
        elif kind == "parabola":
            if n != 2 or (native and not (len(self.surface) == 1 and isinstance(self.surface.components[0], Parabola))):
                raise SceneError("'planner': parabola needs the parabola y = x^2 as its only component")
            base = parabola_planner()
        elif kind == "straight_line":
            base = straight_line_planner(n)
        else:
            raise SceneError(f"'planner': unknown kind {kind!r}; expected one of {', '.join(PLANNER_KINDS)}")
        if self.diffeo is None:
            return base
        try:
            return diffeo_transport(base, self.diffeo, self.surface)
        except DimensionMismatch as exc:
            raise SceneError(f"'diffeo': {exc}") from exc

    def to_dict(self) -> dict:
        doc = {
            "dimension": self.dimension,
            "surface": self.surface.to_list(),
            "planner": {"kind": self.planner_kind, **self.planner_params},
        }
        if self.diffeo is not None:
            doc["diffeo"] = self.diffeo.to_dict()
        return doc


def scene_from_dict(doc) -> Scene:
    if not isinstance(doc, dict):
        raise SceneError("a scene must be a JSON object")
    for key in ("dimension", "surface", "planner"):
        if key not in doc:
            raise SceneError(f"scene is missing field {key!r}")
    dim = doc["dimension"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SceneError(f"'dimension' must be a positive integer, got {dim!r}")
    surface = surface_from_list(doc["surface"])
    if surface.dimension != dim:
        raise SceneError(f"'surface' lives in R^{surface.dimension} but 'dimension' is {dim}")
    kind, params = _selector(doc["planner"])
    diffeo = None
    if doc.get("diffeo") is not None:
        try:
            diffeo = diffeo_from_dict(doc["diffeo"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SceneError(f"'diffeo': {exc}") from exc
        if diffeo.dimension != dim:
            raise SceneError(f"'diffeo' acts on R^{diffeo.dimension} but 'dimension' is {dim}")
    scene = Scene(dim, surface, kind, params, diffeo)
    scene.build_planner()  # surface the compatibility error at load time
    return scene


def load_scene(path) -> Scene:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SceneError(f"cannot read scene file {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SceneError(f"scene file {path} is not valid JSON: {exc}") from exc
    return scene_from_dict(doc)

"""Transversal motion planners on R^n and the combinators that build them.

A planner is an ordered list of open domains of continuity in ``X x X``
together with a rule that turns a query inside some domain into a path.
Domains are tested in order and the first match wins, so overlapping
covers dispatch deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .diffeo import Diffeomorphism, VerticalShear
from .errors import BasepointOnSurface, DimensionMismatch, QueryOutsideAllDomains
from .geometry import (PiecewisePath, as_point, concat, linear_path, map_path,
                       polyline_path, reverse)
from .hypersurface import ImplicitHypersurface
from .hypersurface import parabola as parabola_surface
from .transversality import DEFAULT_CONFIG


@dataclass(frozen=True, eq=False)
class Query:
    start: np.ndarray
    goal: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "start", as_point(self.start))
        object.__setattr__(self, "goal", as_point(self.goal))
        if self.start.shape != self.goal.shape:
            raise DimensionMismatch("query start and goal differ in dimension")

    @property
    def dimension(self) -> int:
        return self.start.size

    def to_dict(self) -> dict:
        return {"start": self.start.tolist(), "goal": self.goal.tolist()}

    def __repr__(self):
        return f"Query({self.start.tolist()} -> {self.goal.tolist()})"


@dataclass(frozen=True)
class Domain:
    label: str
    contains: Callable[[Query], bool]


@dataclass(frozen=True, eq=False)
class Planner:
    name: str
    dimension: int
    domains: tuple[Domain, ...]
    build: Callable[[Query, int], PiecewisePath]
    # queries from the worked examples, always run first by campaigns
    fixtures: tuple[Query, ...] = field(default_factory=tuple)
    # per-domain sub-planners, for nested dispatch labels
    children: tuple[Planner | None, ...] = field(default_factory=tuple)

    def domain_index(self, q: Query) -> int | None:
        if q.dimension != self.dimension:
            raise DimensionMismatch(f"planner {self.name!r} works in R^{self.dimension}, query is in R^{q.dimension}")
        for i, d in enumerate(self.domains):
            if d.contains(q):
                return i
        return None

    def contains(self, q: Query) -> bool:
        return self.domain_index(q) is not None

    def locate(self, q: Query) -> tuple[str, ...]:
        """Labels of the domain chain that handles ``q``, outermost first."""
        i = self.domain_index(q)
        if i is None:
            raise QueryOutsideAllDomains(f"{q!r} lies in no domain of planner {self.name!r}")
        child = self.children[i] if self.children else None
        # leaf planners' own single domain adds nothing to the label chain
        deeper = child.locate(q) if child is not None and child.children else ()
        return (self.domains[i].label,) + deeper

    def plan(self, q: Query) -> PiecewisePath:
        i = self.domain_index(q)
        if i is None:
            raise QueryOutsideAllDomains(f"{q!r} lies in no domain of planner {self.name!r}")
        return self.build(q, i)

    def __call__(self, start, goal) -> PiecewisePath:
        return self.plan(Query(start, goal))


def _everywhere(q: Query) -> bool:
    return True


def _global_planner(name, dimension, path_fn, fixtures=()) -> Planner:
    return Planner(name, dimension, (Domain("XxX", _everywhere),), lambda q, i: path_fn(q), tuple(fixtures))


def composite(name: str, cover, fixtures=()) -> Planner:
    """Glue ``(label, predicate, planner)`` entries into one planner.

    A query is handed to the first entry whose predicate accepts it.
    """
    cover = list(cover)
    if not cover:
        raise ValueError("a composite planner needs at least one entry")
    dims = {p.dimension for _, _, p in cover}
    if len(dims) != 1:
        raise DimensionMismatch(f"composite entries differ in dimension: {sorted(dims)}")
    domains = tuple(Domain(label, pred) for label, pred, _ in cover)
    subs = tuple(p for _, _, p in cover)
    return Planner(name, dims.pop(), domains, lambda q, i: subs[i].plan(q), tuple(fixtures), subs)


def hyperplane_planner(n: int) -> Planner:
    """Global planner transversal to ``R^{n-1} x {0}``: go straight to ``e_n``, then to the goal."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    e_n = np.zeros(n)
    e_n[-1] = 1.0
    fixtures = (Query([-4.0, -1.0], [3.0, 0.0]),) if n == 2 else ()
    return _global_planner(f"hyperplane{n}", n, lambda q: polyline_path(q.start, e_n, q.goal), fixtures)


def concentric_spheres_planner(d: int, radii=(1.0, 2.0)) -> Planner:
    """Global planner transversal to origin-centred spheres: go radially through the origin.

    ``radii`` only needs to be positive, which keeps the origin (the
    breakpoint) off every sphere.
    """
    if d < 0:
        raise ValueError(f"sphere dimension must be >= 0, got {d}")
    if not radii or min(radii) <= 0:
        raise ValueError(f"radii must be positive, got {radii!r}")
    origin = np.zeros(d + 1)
    fixtures = (Query([-3.0, 2.0], [1.0, 1.0]),) if d == 1 else ()
    return _global_planner(f"spheres{d}", d + 1, lambda q: polyline_path(q.start, origin, q.goal), fixtures)


def straight_line_planner(n: int) -> Planner:
    """The naive straight segment; not transversal in general (a negative control)."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    fixtures = (Query([1.0, 1.0], [-1.0, 1.0]),) if n == 2 else ()
    return _global_planner(f"straight_line{n}", n, lambda q: linear_path(q.start, q.goal), fixtures)


# two unit circles about (-2, 0) and (2, 0)

AXIS_HITS = (-3.0, -1.0, 1.0, 3.0)
STRIP_HALF_WIDTH = 0.25
STRIP_TARGETS = (np.array([-2.0, 0.0]), np.array([-2.0, 0.0]), np.array([2.0, 0.0]), np.array([2.0, 0.0]))


def in_A(p) -> bool:
    """The open set of points whose vertical line is never tangent to a circle."""
    x = p[0]
    return x != -3.0 and x != -1.0 and x != 1.0 and x != 3.0


def strip_index(p) -> int | None:
    """Index of the open strip ``|x - a_i| < 1/4`` containing ``p`` (the strips are disjoint)."""
    x = p[0]
    for i, a in enumerate(AXIS_HITS):
        if a - STRIP_HALF_WIDTH < x < a + STRIP_HALF_WIDTH:
            return i
    return None


def _pi(p) -> np.ndarray:
    return np.array([p[0], 0.0])


def _strip_entries(kind: str) -> list:
    """Local algorithms for one family: four for A x B and B x A, sixteen for B x B."""
    entries = []
    if kind == "AxB":
        for j in range(4):
            entries.append((
                f"s_A,{j + 1}",
                lambda q, j=j: in_A(q.start) and strip_index(q.goal) == j,
                _global_planner(f"s_A,{j + 1}", 2,
                                lambda q, j=j: polyline_path(q.start, _pi(q.start), STRIP_TARGETS[j], q.goal)),
            ))
    elif kind == "BxA":
        for i in range(4):
            entries.append((
                f"s_{i + 1},A",
                lambda q, i=i: strip_index(q.start) == i and in_A(q.goal),
                _global_planner(f"s_{i + 1},A", 2,
                                lambda q, i=i: polyline_path(q.start, STRIP_TARGETS[i], _pi(q.goal), q.goal)),
            ))
    else:
        for i in range(4):
            for j in range(4):
                entries.append((
                    f"s_{i + 1},{j + 1}",
                    lambda q, i=i, j=j: strip_index(q.start) == i and strip_index(q.goal) == j,
                    _global_planner(f"s_{i + 1},{j + 1}", 2,
                                    lambda q, i=i, j=j: polyline_path(q.start, STRIP_TARGETS[i],
                                                                      STRIP_TARGETS[j], q.goal)),
                ))
    return entries


def two_circles_planner() -> Planner:
    """Four-domain transversal planner for the two unit circles about ``(+-2, 0)``.

    Paths have three equal-duration legs.  From a point of ``A`` the path
    drops vertically to the x-axis; from a point in strip ``i`` it runs
    straight to the centre of the nearer circle.  The middle leg runs along
    the axis, and the last leg mirrors the first.
    """
    aa = _global_planner("s", 2, lambda q: polyline_path(q.start, _pi(q.start), _pi(q.goal), q.goal))
    cover = [
        ("AxA", lambda q: in_A(q.start) and in_A(q.goal), composite("AxA", [("s", _everywhere, aa)])),
        ("AxB", lambda q: in_A(q.start) and strip_index(q.goal) is not None, composite("AxB", _strip_entries("AxB"))),
        ("BxA", lambda q: strip_index(q.start) is not None and in_A(q.goal), composite("BxA", _strip_entries("BxA"))),
        ("BxB", lambda q: strip_index(q.start) is not None and strip_index(q.goal) is not None,
         composite("BxB", _strip_entries("BxB"))),
    ]
    fixtures = (Query([-2.5, 2.0], [1.5, -2.0]), Query([-3.0, 2.0], [3.0, -2.0]))
    return composite("two_circles", cover, fixtures)


def diffeo_transport(source: Planner, h: Diffeomorphism, surface_preimage: ImplicitHypersurface | None = None,
                     name: str | None = None) -> Planner:
    """Conjugate ``source`` by ``h``: plan ``h(start) -> h(goal)`` upstairs, then map back by ``h^-1``.

    ``source`` must be transversal to some ``W``; the result is then
    transversal to ``h^-1(W)``, passed as ``surface_preimage`` for checking
    only.
    """
    if h.dimension != source.dimension:
        raise DimensionMismatch(f"diffeomorphism of dimension {h.dimension} cannot transport a planner on R^{source.dimension}")
    if surface_preimage is not None and surface_preimage.dimension != source.dimension:
        raise DimensionMismatch("surface preimage dimension differs from the planner's")
    back = h.inverted()

    def pushed(q: Query) -> Query:
        return Query(h.forward(q.start), h.forward(q.goal))

    domains = tuple(Domain(d.label, lambda q, d=d: d.contains(pushed(q))) for d in source.domains)
    fixtures = tuple(Query(back.forward(f.start), back.forward(f.goal)) for f in source.fixtures)
    return Planner(
        name or f"{source.name}@{type(h).__name__}",
        source.dimension,
        domains,
        lambda q, i: map_path(back, source.plan(pushed(q))),
        fixtures,
    )


def parabola_planner() -> Planner:
    """Transversal planner for the parabola ``y = x**2``, transported from the hyperplane planner."""
    p = diffeo_transport(hyperplane_planner(2), VerticalShear(), parabola_surface(), name="parabola")
    return Planner(p.name, p.dimension, p.domains, p.build, (Query([-1.0, 0.0], [1.0, 0.0]),))


@dataclass(frozen=True, eq=False)
class Contraction:
    """Straight-line contraction of an open set onto a basepoint."""

    label: str
    domain: Callable[[np.ndarray], bool]
    basepoint: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "basepoint", as_point(self.basepoint))
        if not self.domain(self.basepoint):
            raise ValueError(f"basepoint {self.basepoint.tolist()} lies outside the domain of {self.label}")

    def contract(self, x) -> PiecewisePath:
        return linear_path(x, self.basepoint)


def planner_from_contraction(H: Contraction, surface: ImplicitHypersurface, cfg=DEFAULT_CONFIG) -> Planner:
    """Out along ``H`` from the start to the basepoint, back along ``H`` to the goal."""
    for c in surface.components:
        v = float(c.value(H.basepoint))
        if abs(v) <= cfg.on_surface_tolerance:
            raise BasepointOnSurface(
                f"basepoint {H.basepoint.tolist()} of {H.label} lies on component {c.label} (f={v:.3g})"
            )
    n = H.basepoint.size
    return Planner(
        f"contraction_{H.label}",
        n,
        (Domain(f"{H.label}x{H.label}", lambda q: H.domain(q.start) and H.domain(q.goal)),),
        lambda q, i: concat(H.contract(q.start), reverse(H.contract(q.goal))),
        tuple(q for q in _CONTRACTION_FIXTURES if H.domain(q.start) and H.domain(q.goal)),
    )


_CONTRACTION_FIXTURES = (Query([-2.5, 2.0], [0.0, -1.0]), Query([2.5, 2.0], [0.0, -1.0]))


def tcat_two_circles_contractions() -> tuple[Contraction, Contraction]:
    """Contractions of ``{x < 1/2}`` onto ``(-2, 0)`` and of ``{x > -1/2}`` onto ``(2, 0)``."""
    return (
        Contraction("U1", lambda p: p[0] < 0.5, [-2.0, 0.0]),
        Contraction("U2", lambda p: p[0] > -0.5, [2.0, 0.0]),
    )

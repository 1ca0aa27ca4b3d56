"""Seeded verification campaigns over planners.

Randomness is Philox-4x64 (``numpy.random.Philox``), keyed by the campaign
seed in the low 64 bits and the query index in the high 64 bits.  Every
query therefore has its own stream, and a report depends only on
``(planner, surface, config)``, never on evaluation order.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainSamplingExhausted, QueryOutsideAllDomains
from .geometry import eval_path
from .hypersurface import ImplicitHypersurface
from .planners import Planner, Query
from .transversality import (DEFAULT_CONFIG, DetectionConfig, Verdict,
                             certify_semi_transversal, crossing_count_oracle)

_MASK64 = (1 << 64) - 1
ENDPOINT_TOL = 1e-9
REJECTION_FACTOR = 1000


def query_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(seed & _MASK64) | ((index & _MASK64) << 64)))


def _box_array(box) -> np.ndarray:
    b = np.asarray(box, dtype=float)
    if b.ndim != 2 or b.shape[1] != 2:
        raise ValueError(f"bounding box must be a list of [lo, hi] pairs, got {box!r}")
    return b


def sample_query(box, rng: np.random.Generator) -> Query:
    """Start and goal drawn independently, each coordinate uniform on its axis interval."""
    b = _box_array(box)
    start, goal = rng.uniform(b[:, 0], b[:, 1], size=(2, b.shape[0]))
    return Query(start, goal)


@dataclass(frozen=True)
class CampaignConfig:
    n_queries: int
    seed: int
    bounding_box: tuple[tuple[float, float], ...]
    detection: DetectionConfig = DEFAULT_CONFIG
    oracle_samples: int | None = 4096

    def __post_init__(self):
        if int(self.n_queries) != self.n_queries or self.n_queries < 1:
            raise ValueError(f"n_queries must be a positive integer, got {self.n_queries}")
        box = tuple((float(lo), float(hi)) for lo, hi in self.bounding_box)
        if not box or any(not (math.isfinite(lo) and math.isfinite(hi) and lo < hi) for lo, hi in box):
            raise ValueError(f"every bounding-box axis needs finite lo < hi, got {self.bounding_box!r}")
        object.__setattr__(self, "bounding_box", box)
        if self.oracle_samples is not None and self.oracle_samples < 4096:
            raise ValueError(f"oracle_samples must be None or at least 4096, got {self.oracle_samples}")

    @classmethod
    def cube(cls, n_queries: int, seed: int, lo: float, hi: float, dimension: int, **kw) -> CampaignConfig:
        return cls(n_queries, seed, ((lo, hi),) * dimension, **kw)


@dataclass(frozen=True, eq=False)
class QueryOutcome:
    index: int
    query: Query
    domain: str
    verdict: Verdict
    endpoint_error: float
    oracle_count: int | None

    @property
    def ok(self) -> bool:
        return self.verdict.passed and self.endpoint_error <= ENDPOINT_TOL


@dataclass
class CampaignReport:
    planner: str
    seed: int
    n_queries: int
    n_pass: int = 0
    n_fail: int = 0
    n_fixtures: int = 0
    n_rejections: int = 0
    failures: list[dict] = field(default_factory=list)
    crossing_histogram: dict[int, int] = field(default_factory=dict)
    oracle_mismatches: list[dict] = field(default_factory=list)
    outcomes: list[QueryOutcome] = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return self.n_fail == 0 and not self.oracle_mismatches

    def to_dict(self) -> dict:
        return {
            "planner": self.planner,
            "seed": self.seed,
            "n_queries": self.n_queries,
            "n_pass": self.n_pass,
            "n_fail": self.n_fail,
            "n_fixtures": self.n_fixtures,
            "n_rejections": self.n_rejections,
            "failures": self.failures,
            "crossing_histogram": {str(k): v for k, v in sorted(self.crossing_histogram.items())},
            "oracle_mismatches": self.oracle_mismatches,
        }


def _draw_in_domain(planner: Planner, box, seed: int, index: int, budget: int) -> tuple[Query, int]:
    rng = query_rng(seed, index)
    misses = 0
    while True:
        q = sample_query(box, rng)
        if planner.contains(q):
            return q, misses
        misses += 1
        if misses > budget:
            raise DomainSamplingExhausted(
                f"planner {planner.name!r}: no in-domain query after {misses} draws (query {index})"
            )


def evaluate_query(planner: Planner, surface: ImplicitHypersurface, q: Query, index: int,
                   cfg: CampaignConfig) -> QueryOutcome:
    path = planner.plan(q)
    err = max(float(np.linalg.norm(eval_path(path, 0.0) - q.start)),
              float(np.linalg.norm(eval_path(path, 1.0) - q.goal)))
    verdict = certify_semi_transversal(path, surface, cfg.detection)
    oracle = None
    if cfg.oracle_samples is not None:
        oracle = crossing_count_oracle(path, surface, cfg.oracle_samples, cfg.detection.endpoint_window)
    return QueryOutcome(index, q, "/".join(planner.locate(q)), verdict, err, oracle)


def run_campaign(planner: Planner, surface: ImplicitHypersurface, cfg: CampaignConfig,
                 keep_outcomes: bool = False) -> CampaignReport:
    """Plan, check endpoints, certify and cross-check ``cfg.n_queries`` queries.

    The planner's worked-example fixtures take the first query slots; the
    rest are rejection-sampled into the planner's domains.
    """
    if planner.dimension != surface.dimension or len(cfg.bounding_box) != planner.dimension:
        raise ValueError(
            f"planner (R^{planner.dimension}), surface (R^{surface.dimension}) and box "
            f"({len(cfg.bounding_box)} axes) disagree on dimension"
        )
    report = CampaignReport(planner.name, cfg.seed, cfg.n_queries)
    histogram: Counter[int] = Counter()
    fixtures = [f for f in planner.fixtures if planner.contains(f)]
    budget = REJECTION_FACTOR * cfg.n_queries
    for index in range(cfg.n_queries):
        if index < len(fixtures):
            q = fixtures[index]
            report.n_fixtures += 1
        else:
            q, misses = _draw_in_domain(planner, cfg.bounding_box, cfg.seed, index, budget - report.n_rejections)
            report.n_rejections += misses
        out = evaluate_query(planner, surface, q, index, cfg)
        if keep_outcomes:
            report.outcomes.append(out)
        histogram[out.verdict.n_transversal] += 1
        if out.ok:
            report.n_pass += 1
        else:
            report.n_fail += 1
            report.failures.append({
                "index": index,
                "query": q.to_dict(),
                "domain": out.domain,
                "endpoint_error": out.endpoint_error,
                "verdict": out.verdict.to_dict(),
            })
        if out.oracle_count is not None and out.verdict.n_transversal != out.oracle_count:
            report.oracle_mismatches.append({
                "index": index,
                "query": q.to_dict(),
                "detected": out.verdict.n_transversal,
                "oracle": out.oracle_count,
            })
    report.crossing_histogram = dict(histogram)
    return report


def cover_check(planner: Planner, box, n: int, seed: int) -> bool:
    """Whether every one of ``n`` seeded random pairs in ``box x box`` lies in some planner domain."""
    b = _box_array(box)
    rng = np.random.Generator(np.random.Philox(key=seed & _MASK64))
    pts = rng.uniform(b[:, 0], b[:, 1], size=(n, 2, b.shape[0]))
    for start, goal in pts:
        try:
            if not planner.contains(Query(start, goal)):
                return False
        except QueryOutsideAllDomains:
            return False
    return True

"""The ten acceptance criteria, each at its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL ...`` line, visible without ``-s``.
"""

import math
import time

import numpy as np
import pytest

from transplan.diffeo import VerticalShear
from transplan.geometry import LinearSegment, MappedSegment, PolynomialSegment, eval_path, map_path
from transplan.harness import CampaignConfig, cover_check, query_rng, run_campaign, sample_query
from transplan.hypersurface import (DiagonalLine, Hyperplane, Parabola, Sphere, concentric_spheres,
                                    horizontal_hyperplane, parabola, two_circles, unit_circle)
from transplan.planners import (Query, concentric_spheres_planner, hyperplane_planner, parabola_planner,
                                planner_from_contraction, straight_line_planner, tcat_two_circles_contractions,
                                two_circles_planner)
from transplan.transversality import EventKind, certify_semi_transversal, crossing_count_oracle


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, f"criterion {n} failed: {detail}"
    return emit


def _pairings():
    circles = two_circles()
    h1, h2 = tcat_two_circles_contractions()
    return [
        (hyperplane_planner(2), horizontal_hyperplane(2)),
        (hyperplane_planner(3), horizontal_hyperplane(3)),
        (concentric_spheres_planner(1, (1.0, 2.0)), concentric_spheres(1, (1.0, 2.0))),
        (two_circles_planner(), circles),
        (parabola_planner(), parabola()),
        (planner_from_contraction(h1, circles), circles),
        (planner_from_contraction(h2, circles), circles),
    ]


def test_criterion_1_hyperplane_fixture(report):
    v = certify_semi_transversal(hyperplane_planner(2)((-4.0, -1.0), (3.0, 0.0)), horizontal_hyperplane(2))
    ev = [e for e in v.events if e.kind is EventKind.TRANSVERSAL]
    ok = (v.passed and len(v.events) == 1 and len(ev) == 1 and abs(ev[0].t - 0.25) <= 1e-9
          and np.linalg.norm(ev[0].point - [-2.0, 0.0]) <= 1e-9)
    report(1, ok, f"status={v.status} events={[(e.t, e.point.tolist()) for e in v.events]}")


def test_criterion_2_spheres_fixture(report):
    v = certify_semi_transversal(concentric_spheres_planner(1)((-3.0, 2.0), (1.0, 1.0)), concentric_spheres(1))
    n1, n2 = math.hypot(-3.0, 2.0), math.hypot(1.0, 1.0)
    # outbound leg (1 - 2t) C1 meets radius r at t = (1 - r/|C1|)/2, inbound at t = (1 + r/|C2|)/2
    analytic = sorted([(1 - 2 / n1) / 2, (1 - 1 / n1) / 2, (1 + 1 / n2) / 2])
    printed = [0.22265, 0.36133, 0.85355]
    ts = [e.t for e in v.events]
    ok = (v.passed and v.n_transversal == 3 and len(ts) == 3
          and all(abs(a - b) <= 1e-6 for a, b in zip(ts, analytic))
          # the five-place values are display roundings; 0.36133 is one unit high (truth 0.3613249...)
          and all(abs(a - b) <= 1e-5 for a, b in zip(ts, printed)))
    report(2, ok, f"status={v.status} t={[round(t, 7) for t in ts]} analytic={[round(t, 7) for t in analytic]}")


def test_criterion_3_two_circles_fixture(report):
    planner = two_circles_planner()
    q = Query([-2.5, 2.0], [1.5, -2.0])
    domain = planner.locate(q)[0]
    v = certify_semi_transversal(planner.plan(q), two_circles())
    ok = domain == "AxA" and v.passed and v.n_transversal == 4 and len(v.events) == 4
    report(3, ok, f"domain={domain} status={v.status} crossings={v.n_transversal}")


def test_criterion_4_parabola_fixture(report):
    path = parabola_planner()((-1.0, 0.0), (1.0, 0.0))
    worst = 0.0
    for t in np.linspace(0.0, 1.0, 101):
        want = ((-(1 - 2 * t), (1 - 2 * t) ** 2 + 4 * t - 1) if t <= 0.5
                else (2 * t - 1, (2 * t - 1) ** 2 - 4 * t + 3))
        worst = max(worst, float(np.linalg.norm(eval_path(path, t) - want)))
    v = certify_semi_transversal(path, parabola())
    ev = v.events
    ok = (worst <= 1e-9 and v.passed and v.n_transversal == 2 and len(ev) == 2
          and abs(ev[0].t - 0.25) <= 1e-9 and abs(ev[1].t - 0.75) <= 1e-9
          and np.linalg.norm(ev[0].point - [-0.5, 0.25]) <= 1e-9
          and np.linalg.norm(ev[1].point - [0.5, 0.25]) <= 1e-9)
    report(4, ok, f"max closed-form error={worst:.2e} status={v.status} t={[e.t for e in ev]}")


def test_criterion_5_tangent_line(report):
    v = certify_semi_transversal(straight_line_planner(2)((1.0, 1.0), (-1.0, 1.0)), unit_circle())
    ok = (v.status == "fail" and len(v.events) == 1 and v.events[0].kind is EventKind.TANGENTIAL
          and abs(v.events[0].t - 0.5) <= 1e-9 and v.events[0].margin <= 1e-6)
    report(5, ok, f"status={v.status} events={[(e.kind.value, e.t, e.margin) for e in v.events]}")


def test_criterion_6_campaign_suite(report):
    lines, ok = [], True
    start = time.perf_counter()
    for planner, surface in _pairings():
        # the oracle cross-check is criterion 7's job; this one asks for verdicts and endpoints
        cfg = CampaignConfig.cube(10_000, 20260101, -10.0, 10.0, planner.dimension, oracle_samples=None)
        r = run_campaign(planner, surface, cfg)
        ok &= r.n_pass == 10_000 and r.n_fail == 0
        lines.append(f"{planner.name}={r.n_pass}/{r.n_queries}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 60.0
    report(6, ok, f"{' '.join(lines)} runtime={elapsed:.1f}s")


def test_criterion_7_oracle_equivalence(report):
    pairings = _pairings()
    mismatches, cases = [], 0
    for i in range(1000):
        planner, surface = pairings[i % len(pairings)]
        rng = query_rng(7, i)
        box = [[-10.0, 10.0]] * planner.dimension
        q = sample_query(box, rng)
        while not planner.contains(q):
            q = sample_query(box, rng)
        path = planner.plan(q)
        detected = certify_semi_transversal(path, surface).n_transversal
        oracle = crossing_count_oracle(path, surface, 16384)
        cases += 1
        if detected != oracle:
            mismatches.append((planner.name, q.to_dict(), detected, oracle))
    report(7, not mismatches, f"cases={cases} mismatches={len(mismatches)} {mismatches[:3]}")


def test_criterion_8_transport_conjugacy(report):
    h = VerticalShear()
    src, par, w, z = hyperplane_planner(2), parabola_planner(), horizontal_hyperplane(2), parabola()
    ts = np.linspace(0.0, 1.0, 33)
    worst, count_mismatch = 0.0, 0
    for i in range(1000):
        q = sample_query([[-10.0, 10.0], [-10.0, 10.0]], query_rng(8, i))
        up = src.plan(Query(h.forward(q.start), h.forward(q.goal)))
        down = par.plan(q)
        worst = max(worst, float(np.abs(down.sample(ts) - map_path(h.inverted(), up).sample(ts)).max()))
        if certify_semi_transversal(down, z).n_transversal != certify_semi_transversal(up, w).n_transversal:
            count_mismatch += 1
    report(8, worst <= 1e-9 and count_mismatch == 0, f"max deviation={worst:.2e} count mismatches={count_mismatch}")


def test_criterion_9_cover(report):
    ok = cover_check(two_circles_planner(), [[-5.0, 5.0], [-5.0, 5.0]], 100_000, 9)
    report(9, ok, "100000 pairs in [-5,5]^2 x [-5,5]^2")


def _rel(an, fd):
    return float(np.linalg.norm(an - fd) / max(np.linalg.norm(an), 1e-300))


def test_criterion_10_derivatives(report):
    rng = np.random.default_rng(10)
    h = 1e-6
    shear = VerticalShear()
    segments = {
        "linear": LinearSegment(0.0, 1.0, (-3.0, 2.0), (4.0, -1.0)),
        "polynomial": PolynomialSegment(0.0, 1.0, [[1.0, -2.0, 0.5, 3.0], [0.0, 1.0, -1.0, 0.25]]),
        "mapped": MappedSegment(0.0, 1.0, LinearSegment(0.0, 1.0, (-1.0, -1.0), (2.0, 0.5)), shear.inverted()),
    }
    worst = {}
    for name, seg in segments.items():
        worst[name] = max(
            _rel(seg.derivative(t), (seg.evaluate(t + h) - seg.evaluate(t - h)) / (2 * h))
            for t in rng.uniform(1e-3, 1 - 1e-3, 32)
        )
    components = {
        "hyperplane": Hyperplane("H", [0.3, -1.2, 2.0], 0.7),
        "sphere": Sphere("S", [1.0, -2.0], 1.5),
        "parabola": Parabola("P"),
        "diagonal": DiagonalLine("D"),
    }
    for name, c in components.items():
        n = c.dimension
        errs = []
        for p in rng.uniform(-5, 5, (64, n)):
            fd = np.array([(c.value(p + h * e) - c.value(p - h * e)) / (2 * h) for e in np.eye(n)])
            errs.append(_rel(c.gradient(p), fd))
        worst[name] = max(errs)
    ok = all(v <= 1e-5 for v in worst.values())
    report(10, ok, " ".join(f"{k}={v:.1e}" for k, v in worst.items()))

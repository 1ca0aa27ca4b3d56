import json

import numpy as np
import pytest

from transplan.errors import DomainSamplingExhausted
from transplan.harness import (CampaignConfig, cover_check, evaluate_query, query_rng, run_campaign,
                               sample_query)
from transplan.hypersurface import concentric_spheres, horizontal_hyperplane, two_circles, unit_circle
from transplan.planners import (Domain, Planner, Query, concentric_spheres_planner, hyperplane_planner,
                                straight_line_planner, two_circles_planner)
from transplan.transversality import EventKind


class TestSampleQuery:
    def test_degenerate_box(self):
        q = sample_query([[0.0, 0.0], [0.0, 0.0]], query_rng(1, 0))
        np.testing.assert_array_equal(q.start, [0, 0])
        np.testing.assert_array_equal(q.goal, [0, 0])

    def test_deterministic_per_seed_and_index(self):
        box = [[-5, 5], [-5, 5]]
        a = sample_query(box, query_rng(42, 17))
        b = sample_query(box, query_rng(42, 17))
        np.testing.assert_array_equal(a.start, b.start)
        np.testing.assert_array_equal(a.goal, b.goal)

    def test_streams_differ_by_index_and_seed(self):
        box = [[-5, 5], [-5, 5]]
        base = sample_query(box, query_rng(42, 0)).start
        assert not np.array_equal(base, sample_query(box, query_rng(42, 1)).start)
        assert not np.array_equal(base, sample_query(box, query_rng(43, 0)).start)

    def test_uniform_mean(self):
        # per-axis sd of U(-5, 5) is 10/sqrt(12); the mean of 2e4 values has sd ~0.02
        pts = np.array([[*sample_query([[-5, 5], [-5, 5]], query_rng(9, i)).start] for i in range(10_000)])
        assert np.all(np.abs(pts.mean(axis=0)) <= 0.2)
        assert pts.min() >= -5 and pts.max() <= 5

    def test_generator_is_philox(self):
        assert type(query_rng(0, 0).bit_generator).__name__ == "Philox"

    def test_per_axis_box(self):
        q = sample_query([[10.0, 11.0], [-1.0, 0.0]], query_rng(3, 3))
        assert 10 <= q.start[0] <= 11 and -1 <= q.start[1] <= 0


class TestConfig:
    def test_n_must_be_positive(self):
        with pytest.raises(ValueError):
            CampaignConfig.cube(0, 1, -1, 1, 2)

    def test_box_must_be_ordered(self):
        with pytest.raises(ValueError):
            CampaignConfig(10, 1, ((1.0, -1.0), (0.0, 1.0)))

    def test_oracle_samples_floor(self):
        with pytest.raises(ValueError):
            CampaignConfig.cube(10, 1, -1, 1, 2, oracle_samples=100)


class TestRunCampaign:
    def test_hyperplane_campaign_passes(self):
        r = run_campaign(hyperplane_planner(2), horizontal_hyperplane(2), CampaignConfig.cube(300, 5, -10, 10, 2))
        assert r.n_pass == 300 and r.n_fail == 0 and r.oracle_mismatches == []
        assert r.n_pass + r.n_fail == r.n_queries
        assert sum(r.crossing_histogram.values()) == 300

    def test_fixtures_run_first(self):
        r = run_campaign(two_circles_planner(), two_circles(), CampaignConfig.cube(5, 5, -10, 10, 2),
                         keep_outcomes=True)
        assert r.n_fixtures == 2
        np.testing.assert_array_equal(r.outcomes[0].query.start, [-2.5, 2.0])
        assert r.outcomes[0].domain == "AxA/s" and r.outcomes[1].domain == "BxB/s_1,4"
        assert r.outcomes[0].verdict.n_transversal == 4

    def test_straight_line_pinned_failure(self):
        r = run_campaign(straight_line_planner(2), unit_circle(), CampaignConfig.cube(50, 1, -2, 2, 2))
        assert r.n_fail >= 1
        first = r.failures[0]
        assert first["index"] == 0 and first["query"] == {"start": [1.0, 1.0], "goal": [-1.0, 1.0]}
        assert first["verdict"]["events"][0]["kind"] == EventKind.TANGENTIAL.value
        assert not r.ok

    def test_bit_identical_reports(self):
        cfg = CampaignConfig.cube(80, 123, -10, 10, 2)
        a = run_campaign(concentric_spheres_planner(1), concentric_spheres(1), cfg)
        b = run_campaign(concentric_spheres_planner(1), concentric_spheres(1), cfg)
        assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())

    def test_order_independent(self):
        # query i depends only on (seed, i)
        planner, surf = hyperplane_planner(2), horizontal_hyperplane(2)
        long = run_campaign(planner, surf, CampaignConfig.cube(30, 8, -10, 10, 2), keep_outcomes=True)
        short = run_campaign(planner, surf, CampaignConfig.cube(10, 8, -10, 10, 2), keep_outcomes=True)
        for x, y in zip(short.outcomes, long.outcomes):
            np.testing.assert_array_equal(x.query.start, y.query.start)

    def test_dimension_check(self):
        with pytest.raises(ValueError):
            run_campaign(hyperplane_planner(3), horizontal_hyperplane(2), CampaignConfig.cube(5, 1, -1, 1, 2))

    def test_sampling_exhausted(self):
        never = Planner("never", 2, (Domain("empty", lambda q: False),), lambda q, i: None)
        with pytest.raises(DomainSamplingExhausted):
            run_campaign(never, two_circles(), CampaignConfig.cube(2, 1, -1, 1, 2))

    def test_rejection_sampling_into_domain(self):
        left = Planner("left", 2, (Domain("x<0", lambda q: q.start[0] < 0 and q.goal[0] < 0),),
                       lambda q, i: hyperplane_planner(2).plan(q))
        r = run_campaign(left, horizontal_hyperplane(2), CampaignConfig.cube(40, 2, -1, 1, 2), keep_outcomes=True)
        assert r.n_rejections > 0
        assert all(o.query.start[0] < 0 and o.query.goal[0] < 0 for o in r.outcomes)

    def test_report_json_shape(self):
        r = run_campaign(hyperplane_planner(2), horizontal_hyperplane(2), CampaignConfig.cube(4, 0, -10, 10, 2))
        doc = json.loads(json.dumps(r.to_dict()))
        assert set(doc) >= {"n_pass", "n_fail", "failures", "crossing_histogram", "oracle_mismatches"}

    def test_oracle_can_be_skipped(self):
        cfg = CampaignConfig.cube(20, 0, -10, 10, 2, oracle_samples=None)
        r = run_campaign(hyperplane_planner(2), horizontal_hyperplane(2), cfg, keep_outcomes=True)
        assert r.ok and all(o.oracle_count is None for o in r.outcomes)

    def test_evaluate_query_records_endpoint_error(self):
        cfg = CampaignConfig.cube(1, 0, -1, 1, 2)
        out = evaluate_query(hyperplane_planner(2), horizontal_hyperplane(2), Query([0.3, 0.4], [1.0, -2.0]), 0, cfg)
        assert out.endpoint_error == 0.0 and out.ok and out.oracle_count == 1


class TestCoverCheck:
    def test_two_circles_cover(self):
        assert cover_check(two_circles_planner(), [[-5, 5], [-5, 5]], 20_000, 7)

    def test_global_planner(self):
        assert cover_check(hyperplane_planner(3), [[-100, 100]] * 3, 1000, 1)

    def test_empty_domain_list(self):
        assert not cover_check(Planner("none", 2, (), lambda q, i: None), [[-1, 1], [-1, 1]], 10, 1)

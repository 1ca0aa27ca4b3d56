import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from transplan.diffeo import Composite, Identity, Inverted, VerticalShear, diffeo_from_dict
from transplan.errors import DimensionMismatch

SHEAR = VerticalShear()
coord = st.floats(-10, 10, allow_nan=False)
pt = st.tuples(coord, coord)


class TestForwardInverse:
    def test_shear_forward(self):
        np.testing.assert_array_equal(SHEAR.forward((1.0, 1.0)), [1.0, 0.0])

    def test_shear_fixes_axis(self):
        np.testing.assert_array_equal(SHEAR.forward((0.0, 3.5)), [0.0, 3.5])

    def test_shear_inverse(self):
        np.testing.assert_array_equal(SHEAR.inverse((1.0, 0.0)), [1.0, 1.0])

    def test_identity(self):
        p = np.array([0.25, -3.0, 7.0])
        np.testing.assert_array_equal(Identity(3).forward(p), p)
        np.testing.assert_array_equal(Identity(3).inverse(p), p)

    def test_round_trip_64_points(self):
        pts = np.random.default_rng(5).uniform(-10, 10, (64, 2))
        np.testing.assert_allclose(SHEAR.inverse(SHEAR.forward(pts)), pts, atol=1e-10, rtol=0)

    def test_scalar_fast_paths(self):
        p = (0.7, -1.3)
        assert SHEAR.forward_point(p) == tuple(SHEAR.forward(p).tolist())
        assert SHEAR.inverse_point(p) == tuple(SHEAR.inverse(p).tolist())

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            SHEAR.forward((1.0, 2.0, 3.0))
        with pytest.raises(DimensionMismatch):
            VerticalShear(3)


class TestPushforward:
    def test_inverse_jacobian(self):
        np.testing.assert_array_equal(SHEAR.pushforward((1.5, -2.0), (1.0, 0.0), "inverse"), [1.0, 3.0])

    def test_forward_jacobian_on_vertical(self):
        np.testing.assert_array_equal(SHEAR.pushforward((1.5, -2.0), (0.0, 1.0), "forward"), [0.0, 1.0])

    def test_identity(self):
        np.testing.assert_array_equal(Identity(2).pushforward((3.0, 4.0), (-1.0, 2.0)), [-1.0, 2.0])

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            SHEAR.pushforward((0, 0), (1, 0), "sideways")

    @given(pt, pt)
    def test_chain_rule_consistency(self, p, v):
        w = SHEAR.pushforward(p, v, "forward")
        back = SHEAR.pushforward(SHEAR.forward(p), w, "inverse")
        np.testing.assert_allclose(back, v, atol=1e-9 * (1 + np.linalg.norm(w)), rtol=0)


@pytest.mark.parametrize("h", [
    SHEAR, SHEAR.inverted(), Composite(SHEAR, SHEAR), Composite(SHEAR.inverted(), Identity(2)),
], ids=["shear", "inverse", "shear∘shear", "inverse∘id"])
def test_pushforward_matches_finite_difference(h):
    rng = np.random.default_rng(8)
    eps = 1e-6
    for p, v in zip(rng.uniform(-3, 3, (32, 2)), rng.normal(size=(32, 2))):
        fd = (h.forward(p + eps * v) - h.forward(p - eps * v)) / (2 * eps)
        an = h.pushforward(p, v)
        assert np.linalg.norm(an - fd) <= 1e-5 * np.linalg.norm(an)
        fd_inv = (h.inverse(p + eps * v) - h.inverse(p - eps * v)) / (2 * eps)
        an_inv = h.pushforward(p, v, "inverse")
        assert np.linalg.norm(an_inv - fd_inv) <= 1e-5 * np.linalg.norm(an_inv)


class TestAlgebra:
    def test_inverted_swaps_directions(self):
        inv = SHEAR.inverted()
        assert isinstance(inv, Inverted)
        np.testing.assert_array_equal(inv.forward((1.0, 0.0)), [1.0, 1.0])
        assert inv.inverted() is SHEAR

    def test_composite_order(self):
        # outer after inner: shear twice subtracts 2x^2
        np.testing.assert_array_equal(Composite(SHEAR, SHEAR).forward((2.0, 1.0)), [2.0, -7.0])

    def test_composite_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            Composite(SHEAR, Identity(3))

    @pytest.mark.parametrize("h", [Identity(3), SHEAR, SHEAR.inverted(), Composite(SHEAR.inverted(), SHEAR)])
    def test_dict_round_trip(self, h):
        back = diffeo_from_dict(h.to_dict())
        p = np.random.default_rng(1).uniform(-2, 2, (5, h.dimension))
        np.testing.assert_array_equal(back.forward(p), h.forward(p))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            diffeo_from_dict({"kind": "twist"})

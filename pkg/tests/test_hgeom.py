"""Tests for the hyperbolic geometry kernel."""
import math

import pytest
from hypothesis import given, settings as hsettings, strategies as st

from foliation.curves import EuclideanRay, GeodesicSemicircle, HorocycleLine, HyperbolicCircle
from foliation.errors import DomainError, SaturationError
from foliation.hgeom import (
    HPoint,
    Horocycle,
    LogScalar,
    PolarPoint,
    UnitVector,
    boundary_angle,
    dilate,
    horocycle_from_basepoint,
    hpoint_to_polar,
    hyp_curvature,
    hyp_distance,
    osculating_horocycle,
    polar_to_hpoint,
    symmetric_pair_distance,
)

coords = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)
log_heights = st.floats(min_value=-20.0, max_value=20.0, allow_nan=False)
points = st.builds(HPoint, coords, log_heights)
well_placed = st.builds(HPoint, coords, st.floats(min_value=-5.0, max_value=20.0))


# =============================================================================
# LogScalar
# =============================================================================

class TestLogScalar:

    def test_from_value_and_back(self):
        assert LogScalar.from_value(65536).value == pytest.approx(65536.0)

    def test_huge_int_saturates(self):
        assert LogScalar.from_value(2**65536).saturated

    def test_zero(self):
        zero = LogScalar.from_value(0)
        assert zero.is_zero
        assert zero.value == 0.0

    def test_saturated_value_raises(self):
        with pytest.raises(SaturationError):
            LogScalar.from_log(701.0).value

    def test_nan_rejected(self):
        with pytest.raises(DomainError):
            LogScalar.from_log(float("nan"))

    def test_addition_in_log_domain(self):
        total = LogScalar.from_value(3.0) + LogScalar.from_value(4.0)
        assert total.value == pytest.approx(7.0)

    def test_ordering(self):
        assert LogScalar.from_value(2.0) < LogScalar.from_value(3.0)


# =============================================================================
# Distances
# =============================================================================

class TestHypDistance:

    def test_vertical_segment(self):
        assert hyp_distance(HPoint.from_xy(0, 1), HPoint.from_xy(0, math.e)) == pytest.approx(1.0, abs=1e-12)

    def test_horocycle_pair(self):
        d = hyp_distance(HPoint.from_xy(-1, 1), HPoint.from_xy(1, 1))
        assert d == pytest.approx(math.acosh(3.0), rel=1e-12)

    def test_identity(self):
        p = HPoint.from_xy(0.3, 2.0)
        assert hyp_distance(p, p) == 0.0

    def test_saturated_point(self):
        with pytest.raises(SaturationError):
            hyp_distance(HPoint(0.0, 800.0, True), HPoint.from_xy(0, 1))

    @given(points, points)
    def test_symmetry(self, p, q):
        assert hyp_distance(p, q) == pytest.approx(hyp_distance(q, p), rel=1e-12, abs=1e-12)

    @given(well_placed, well_placed, st.floats(min_value=-30.0, max_value=30.0))
    def test_dilation_invariance(self, p, q, log_t):
        base = hyp_distance(p, q)
        moved = hyp_distance(dilate(p, log_t), dilate(q, log_t))
        assert moved == pytest.approx(base, rel=1e-9, abs=1e-7)


class TestSymmetricPairDistance:

    def test_quarter_angle(self):
        assert symmetric_pair_distance(math.pi / 4) == pytest.approx(math.acosh(3.0), rel=1e-12)

    def test_right_angle_is_zero(self):
        assert symmetric_pair_distance(math.pi / 2) == pytest.approx(0.0, abs=1e-15)

    def test_default_delta(self):
        expected = math.acosh(1.0 + 2.0 / math.tan(0.1) ** 2)
        assert symmetric_pair_distance(0.1) == pytest.approx(expected, rel=1e-12)
        assert symmetric_pair_distance(0.1) == pytest.approx(5.98, abs=0.01)

    @pytest.mark.parametrize("n", range(6))
    @pytest.mark.parametrize("log_r", [0.0, 10.0, 100.0, 600.0])
    def test_independent_of_radius(self, n, log_r):
        theta = 0.1 / 2**n
        p = polar_to_hpoint(PolarPoint(theta, log_r))
        q = polar_to_hpoint(PolarPoint(math.pi - theta, log_r))
        expected = math.acosh(1.0 + 2.0 / math.tan(theta) ** 2)
        assert hyp_distance(p, q) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("theta", [0.0, -0.1, 2.0])
    def test_domain(self, theta):
        with pytest.raises(DomainError):
            symmetric_pair_distance(theta)


class TestPolar:

    @given(st.floats(min_value=1e-3, max_value=math.pi - 1e-3), st.floats(min_value=-50.0, max_value=50.0))
    def test_round_trip(self, theta, log_r):
        back = hpoint_to_polar(polar_to_hpoint(PolarPoint(theta, log_r)))
        assert back.theta == pytest.approx(theta, rel=1e-9)
        assert back.log_r == pytest.approx(log_r, abs=1e-9)

    def test_saturates_far_out(self):
        assert polar_to_hpoint(PolarPoint(0.5, 750.0)).saturated

    def test_dilate_zero_is_identity(self):
        p = HPoint.from_xy(1.5, 0.5)
        assert dilate(p, 0.0) is p


# =============================================================================
# Curvature and horocycles
# =============================================================================

class TestHypCurvature:

    @pytest.mark.parametrize("s", [-3.0, 0.0, 2.5])
    def test_horocycle_line(self, s):
        assert hyp_curvature(HorocycleLine(), s) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("s", [0.5, 1.2, 2.0])
    def test_geodesic(self, s):
        assert hyp_curvature(GeodesicSemicircle(), s) == pytest.approx(0.0, abs=1e-12)

    def test_euclidean_ray_is_equidistant(self):
        ray = EuclideanRay(angle=math.pi / 3)
        values = [hyp_curvature(ray, s) for s in (0.5, 1.0, 5.0)]
        assert values == pytest.approx([values[0]] * 3, abs=1e-12)
        assert abs(values[0]) < 1.0

    def test_hyperbolic_circle(self):
        assert hyp_curvature(HyperbolicCircle(), 1.0) == pytest.approx(2.0, rel=1e-12)

    def test_finite_differences_agree(self):
        circle = HyperbolicCircle()
        assert hyp_curvature(circle, 0.7, method="fd") == pytest.approx(hyp_curvature(circle, 0.7), rel=1e-5)


class TestOsculatingHorocycle:

    def test_upward_normal(self):
        h = osculating_horocycle(HPoint.from_xy(0, 1), UnitVector(0.0, 1.0))
        assert h.at_infinity
        assert h.log_scale == pytest.approx(0.0)

    def test_sideways_normal(self):
        h = osculating_horocycle(HPoint.from_xy(0, 1), UnitVector(1.0, 0.0))
        assert h.basepoint == pytest.approx(1.0)
        assert h.center == pytest.approx((1.0, 1.0))

    def test_downward_normal(self):
        h = osculating_horocycle(HPoint.from_xy(0, 2), UnitVector(0.0, -1.0))
        assert h.basepoint == pytest.approx(0.0)
        assert h.center == pytest.approx((0.0, 1.0))

    def test_passes_through_point(self):
        p = HPoint.from_xy(0.4, 1.3)
        h = osculating_horocycle(p, UnitVector.normalized(0.6, -0.8))
        assert h.contains(p)

    def test_from_basepoint(self):
        p = HPoint.from_xy(1.0, 1.0)
        h = horocycle_from_basepoint(0.0, p)
        assert h.contains(p)
        assert h.center == pytest.approx((0.0, 1.0))

    def test_at_infinity_has_no_center(self):
        with pytest.raises(DomainError):
            Horocycle(math.inf, 0.0).center


class TestBoundaryAngle:

    def test_landmarks(self):
        assert boundary_angle(math.inf) == 0.0
        assert boundary_angle(0.0) == pytest.approx(math.pi)
        assert boundary_angle(1.0) == pytest.approx(-math.pi / 2)
        assert boundary_angle(-1.0) == pytest.approx(math.pi / 2)

    @hsettings(max_examples=200)
    @given(st.floats(min_value=-1e6, max_value=1e6), st.floats(min_value=1e-6, max_value=1e6))
    def test_anticlockwise_order(self, b, step):
        # once past b = 0 the angle wraps from π to −π; a tiny positive b already rounds onto π
        a0, a1 = boundary_angle(b), boundary_angle(b + step)
        if b <= 0.0 < b + step or a0 == math.pi:
            return
        assert a1 > a0 or a1 == pytest.approx(a0, abs=1e-12)

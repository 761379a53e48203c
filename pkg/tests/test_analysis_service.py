"""Tests for distortion, monotonicity, intersection and curvature analysis."""
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from foliation.analysis_service import (
    DensePairPlan,
    SymmetricPairPlan,
    basepoint_monotonicity,
    curvature_scan,
    curve_self_intersection,
    distortion_profile,
    distortion_profile_e2,
    exponential_bound_check,
    growth_separation,
    horocycle_distortion_law,
    leaf_self_intersection,
    self_intersection,
)
from foliation.curves import FigureEight, GeodesicSemicircle, HorocycleLine, HyperbolicCircle, LoopedLimacon
from foliation.errors import AnalysisError, SamplingError
from foliation.hgeom import HPoint, hyp_distance
from foliation.leaf_service import FoliationFamily, leaf_at


# =============================================================================
# Horocycle law
# =============================================================================

class TestHorocycleLaw:

    @pytest.mark.parametrize("a", np.logspace(-3, 3, 50))
    def test_matches_direct_distance(self, a):
        d_leaf, d_ambient = horocycle_distortion_law(float(a))
        assert d_leaf == pytest.approx(2.0 * a)
        direct = hyp_distance(HPoint.from_xy(-a, 1.0), HPoint.from_xy(a, 1.0))
        assert d_ambient == pytest.approx(direct, rel=1e-9)
        assert d_leaf == pytest.approx(2.0 * math.sinh(d_ambient / 2.0), rel=1e-9)

    @pytest.mark.parametrize("a", [0.0, -1.0])
    def test_positive_width_required(self, a):
        with pytest.raises(AnalysisError):
            horocycle_distortion_law(a)

    def test_horocycle_leaf_profile(self, horocycle_leaf):
        profile = distortion_profile(horocycle_leaf, SymmetricPairPlan(extra_positions=(0.2, 0.5, 1.0)))
        assert len(profile.samples) == 4
        for sample in profile.samples:
            a = 1.0 / math.tan(sample.position)
            assert sample.d_leaf.value == pytest.approx(2.0 * a, rel=1e-9)
            assert sample.d_leaf.value == pytest.approx(2.0 * math.sinh(sample.d_ambient / 2.0), rel=1e-9)


# =============================================================================
# Distortion profiles
# =============================================================================

class TestDistortionProfile:

    def test_h2_default_plan(self, h2_leaf):
        profile = distortion_profile(h2_leaf)
        assert [s.n for s in profile.samples] == [0, 1, 2]
        ambient = [s.d_ambient for s in profile.samples]
        assert ambient == sorted(ambient)
        assert ambient[0] == pytest.approx(math.acosh(1.0 + 2.0 / math.tan(0.1) ** 2), rel=1e-12)
        assert "oracle=tower" in profile.provenance
        assert 0.9 <= profile.kappa_min <= profile.kappa_max <= 1.1

    def test_leaf_distance_outgrows_ambient(self, h2_leaf):
        samples = distortion_profile(h2_leaf).samples
        leaf_gain = samples[2].d_leaf.value - samples[0].d_leaf.value
        ambient_gain = samples[2].d_ambient - samples[0].d_ambient
        assert leaf_gain > ambient_gain

    @pytest.mark.parametrize("log_t", [-8.0, 5.0])
    def test_invariant_under_dilation(self, h2_leaf, log_t):
        moved = leaf_at(FoliationFamily.of(h2_leaf), log_t)
        base = distortion_profile(h2_leaf).samples
        other = distortion_profile(moved).samples
        for a, b in zip(base, other):
            assert b.d_ambient == pytest.approx(a.d_ambient, rel=1e-9)
            assert b.d_leaf.value == pytest.approx(a.d_leaf.value, rel=1e-9)

    def test_empty_plan(self, h2_leaf):
        with pytest.raises(AnalysisError, match="empty"):
            distortion_profile(h2_leaf, SymmetricPairPlan(indices=()))

    def test_anchor_beyond_leaf(self, h2_leaf):
        with pytest.raises(AnalysisError, match="too small"):
            distortion_profile(h2_leaf, SymmetricPairPlan(indices=(5,)))

    def test_curve_needs_dense_plan(self):
        with pytest.raises(AnalysisError):
            distortion_profile(HorocycleLine())

    def test_e2_profile(self, e2_leaf):
        profile = distortion_profile_e2(e2_leaf)
        assert [s.n for s in profile.samples] == [0, 1, 2, 3]
        for sample in profile.samples:
            assert sample.d_ambient == pytest.approx(2.0 * e2_leaf.anchor_x(sample.n), rel=1e-12)
            assert sample.d_leaf.log_value >= e2_leaf.anchors[sample.n] - 1e-9
        assert profile.kappa_max <= 0.1 + 1e-12

    def test_e2_vertex_sample(self, e2_leaf):
        profile = distortion_profile(e2_leaf, SymmetricPairPlan(indices=(0,), extra_positions=(0.0,)))
        assert profile.samples[0].d_ambient == 0.0
        assert profile.samples[0].d_leaf.is_zero

    def test_geodesic_is_undistorted(self):
        plan = DensePairPlan(half_widths=(0.1, 0.5, 1.0), center=math.pi / 2)
        profile = distortion_profile(GeodesicSemicircle(), plan)
        for sample in profile.samples:
            assert sample.d_leaf.value == pytest.approx(sample.d_ambient, rel=1e-8)

    def test_dense_plan_outside_domain(self):
        with pytest.raises(AnalysisError, match="too small"):
            distortion_profile(HorocycleLine(), DensePairPlan(half_widths=(6.0,)))


# =============================================================================
# Exponential bound and growth
# =============================================================================

class TestExponentialBound:

    def test_horocycle_curve_passes(self):
        profile = distortion_profile(HorocycleLine(), DensePairPlan(half_widths=(0.5, 1.0, 2.0, 4.0)))
        report = exponential_bound_check(profile)
        assert report.status == "pass"
        assert report.checked == 4
        assert abs(report.worst_margin) <= 1e-6

    def test_horocycle_leaf_passes(self, horocycle_leaf):
        report = exponential_bound_check(distortion_profile(horocycle_leaf))
        assert report.status == "pass"

    def test_geodesic_passes(self):
        plan = DensePairPlan(half_widths=(0.2, 1.0), center=math.pi / 2)
        assert exponential_bound_check(distortion_profile(GeodesicSemicircle(), plan)).status == "pass"

    def test_pinched_leaf_never_fails(self, h2_leaf):
        profile = distortion_profile(h2_leaf)
        report = exponential_bound_check(profile)
        if profile.kappa_max > 1.0 + 1e-6:
            assert report.status == "inapplicable"
            assert "κ exceeds 1" in report.note
        else:
            assert report.status == "pass"

    def test_circle_is_inapplicable(self):
        plan = DensePairPlan(half_widths=(0.5, 1.0), center=math.pi)
        report = exponential_bound_check(distortion_profile(HyperbolicCircle(), plan))
        assert report.status == "inapplicable"


def test_growth_separation(h2_leaf, tower):
    report = growth_separation(distortion_profile(h2_leaf), tower)
    assert report.holds
    assert [row.n for row in report.rows] == [0, 1, 2]
    assert report.rows[2].vertical_travel == pytest.approx(6.0)


# =============================================================================
# Osculating basepoints
# =============================================================================

class TestBasepointMonotonicity:

    def test_hyperbolic_circle(self):
        report = basepoint_monotonicity(HyperbolicCircle(), 1000)
        assert report.verdict == "monotone_anticlockwise"
        assert report.strict
        assert report.winding == 1

    def test_horocycle_is_not_strict(self):
        report = basepoint_monotonicity(HorocycleLine(), 200)
        assert report.verdict == "monotone_anticlockwise"
        assert not report.strict
        assert report.winding == 0

    def test_geodesic_is_inapplicable(self):
        report = basepoint_monotonicity(GeodesicSemicircle(), 200)
        assert report.verdict == "inapplicable"
        assert "κ" in report.note

    def test_euclidean_leaf_is_inapplicable(self, e2_leaf):
        assert basepoint_monotonicity(e2_leaf, 100).verdict == "inapplicable"

    def test_horocycle_leaf(self, horocycle_leaf):
        report = basepoint_monotonicity(horocycle_leaf, 200)
        assert report.verdict == "monotone_anticlockwise"

    def test_pinched_leaf_dips_below_unit_curvature(self, h2_leaf):
        report = basepoint_monotonicity(h2_leaf, 1000)
        assert report.verdict == "inapplicable"
        assert "κ" in report.note

    def test_too_few_samples(self):
        with pytest.raises(SamplingError):
            basepoint_monotonicity(HyperbolicCircle(), 2)


# =============================================================================
# Self-intersection
# =============================================================================

class TestSelfIntersection:

    def test_bowtie(self):
        report = self_intersection([(0.0, 0.0), (2.0, 2.0), (2.0, 0.0), (0.0, 2.0)], tolerance=1.0)
        assert report.found
        assert report.segments == (0, 2)
        assert report.point == pytest.approx((1.0, 1.0))

    def test_simple_polyline(self):
        report = self_intersection([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], tolerance=1.0)
        assert not report.found

    def test_collinear_overlap(self):
        points = [(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (2.0, 1.0), (2.0, 0.0), (1.0, 0.0)]
        report = self_intersection(points, tolerance=1.0)
        assert report.found
        assert report.segments[0] == 0

    @given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=2, max_size=30, unique=True))
    def test_graph_never_crosses(self, xs):
        xs = sorted(xs)
        points = [(x, x * x) for x in xs]
        assert not self_intersection(points, tolerance=1.0).found

    def test_figure_eight(self):
        report = curve_self_intersection(FigureEight(), 4096)
        assert report.found
        assert report.refined
        assert report.residual <= 1e-8
        assert sorted(report.parameters) == pytest.approx([0.0, math.pi], abs=1e-6)
        assert report.point == pytest.approx((0.0, 2.0), abs=1e-6)

    def test_limacon(self):
        report = curve_self_intersection(LoopedLimacon(), 4096)
        assert report.found
        assert report.point == pytest.approx((0.0, 2.0), abs=1e-6)

    @pytest.mark.parametrize("curve", [FigureEight(), LoopedLimacon()], ids=["figure-eight", "limacon"])
    @pytest.mark.parametrize("samples", [1000, 4000])
    def test_crossing_is_refined(self, curve, samples):
        report = curve_self_intersection(curve, samples)
        assert report.found
        assert report.refined
        assert report.residual <= 1e-8
        assert report.point == pytest.approx((0.0, 2.0), abs=1e-9)

    def test_horocycle_is_embedded(self):
        assert not curve_self_intersection(HorocycleLine(), 4096).found

    def test_leaves_are_embedded(self, h2_leaf, e2_leaf):
        assert not leaf_self_intersection(h2_leaf, 4096).found
        assert not leaf_self_intersection(e2_leaf, 4096).found

    def test_sparse_sampling(self):
        with pytest.raises(SamplingError, match="sample more densely"):
            curve_self_intersection(FigureEight(), 50)


# =============================================================================
# Curvature scans
# =============================================================================

class TestCurvatureScan:

    def test_horocycle(self):
        scan = curvature_scan(HorocycleLine(), 100)
        assert scan.kappa_min == pytest.approx(1.0, abs=1e-12)
        assert scan.kappa_max == pytest.approx(1.0, abs=1e-12)

    def test_leaf_segments_named(self, h2_leaf):
        scan = curvature_scan(h2_leaf, 512)
        assert scan.segment_min
        assert scan.max_abs <= 1.1

    def test_too_few_samples(self):
        with pytest.raises(SamplingError):
            curvature_scan(HorocycleLine(), 2)

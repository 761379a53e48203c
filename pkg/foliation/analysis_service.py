"""
Analysis Service

Measures leaves and test curves: distortion profiles from witness pairs, the
exponential-bound and horocycle laws, osculating-basepoint monotonicity,
self-intersection detection and curvature scans.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import optimize

from .config import settings
from .curves import sample_curve
from .egeom import EPoint, adaptive_quad, euc_distance
from .errors import AnalysisError, FoliationError, SamplingError, SaturationError
from .growth import GrowthOracle, log_radius
from .hgeom import (
    HPoint,
    LogScalar,
    UnitVector,
    _curve_derivatives,
    boundary_angle,
    hyp_curvature,
    hyp_distance,
    osculating_horocycle,
    symmetric_pair_distance,
)
from .leaf_service import (
    CurvaturePiece,
    E2LeafCurve,
    LeafCurve,
    e2_arc_length,
    e2_curvature_pieces,
    e2_log_height,
    e2_polyline,
    h2_curvature_pieces,
    leaf_frame,
    leaf_polyline,
    scan_extrema,
    symmetric_arc_length,
)

logger = logging.getLogger(__name__)

Target = Union[LeafCurve, E2LeafCurve, object]


# ============================================================================
# Profiles and reports
# ============================================================================

@dataclass(frozen=True)
class DistortionSample:
    """One witness pair: ambient distance and leaf distance."""

    d_ambient: float
    d_leaf: LogScalar
    label: str
    n: Optional[int] = None
    position: Optional[float] = None

    @property
    def saturated(self) -> bool:
        return self.d_leaf.saturated


@dataclass(frozen=True)
class DistortionProfile:
    """Witness samples sorted by ambient distance; a lower bound for the distortion function."""

    samples: Tuple[DistortionSample, ...]
    provenance: str
    kappa_min: float
    kappa_max: float


@dataclass(frozen=True)
class SymmetricPairPlan:
    """Mirror pairs (θ, π − θ) at the anchor angles, or (±x) at the E² anchors."""

    indices: Optional[Tuple[int, ...]] = None
    extra_positions: Tuple[float, ...] = ()


@dataclass(frozen=True)
class DensePairPlan:
    """Pairs γ(center − a), γ(center + a) along a parametrized curve."""

    half_widths: Tuple[float, ...]
    center: float = 0.0


class CurvatureScan(BaseModel):
    model_config = ConfigDict(frozen=True)

    kappa_min: float
    kappa_max: float
    argmin: float
    argmax: float
    segment_min: str
    segment_max: str
    samples: int

    @property
    def max_abs(self) -> float:
        return max(abs(self.kappa_min), abs(self.kappa_max))


class MonotonicityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    parameters: List[float]
    angles: List[float]
    verdict: Literal["monotone_anticlockwise", "violation", "inapplicable"]
    violation_index: Optional[int] = None
    winding: int = 0
    strict: bool = False
    note: str = ""


class IntersectionReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    found: bool
    segments: Optional[Tuple[int, int]] = None
    parameters: Optional[Tuple[float, float]] = None
    point: Optional[Tuple[float, float]] = None
    residual: Optional[float] = None
    refined: bool = False


class ExpBoundReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: Literal["pass", "fail", "inapplicable"]
    worst_margin: Optional[float] = None
    checked: int = 0
    excluded_saturated: int = 0
    note: str = ""


class GrowthRow(BaseModel):
    n: int
    d_ambient: float
    log_d_leaf: float
    vertical_travel: float
    separated: bool
    ambient_bounded: bool


class GrowthReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: List[GrowthRow]
    holds: bool
    first_superexponential: Optional[int] = None


# ============================================================================
# Curvature
# ============================================================================

def _curve_piece(curve) -> CurvaturePiece:
    if not hasattr(curve, "domain"):
        raise AnalysisError("curve has no parameter domain to scan")

    def kappa(grid: np.ndarray) -> np.ndarray:
        values = []
        for s in np.atleast_1d(grid):
            try:
                values.append(hyp_curvature(curve, float(s)))
            except FoliationError as e:
                raise AnalysisError(f"curvature evaluation failed at s={float(s)!r}: {e}") from e
        return np.array(values)

    s0, s1 = curve.domain
    return CurvaturePiece(type(curve).__name__, s0, s1, kappa, float)


def _pieces_for(target: Target) -> List[CurvaturePiece]:
    if isinstance(target, LeafCurve):
        return h2_curvature_pieces(target)
    if isinstance(target, E2LeafCurve):
        return e2_curvature_pieces(target)
    return [_curve_piece(target)]


def curvature_scan(target: Target, samples: int) -> CurvatureScan:
    """
    Extremes of signed curvature over a leaf or a parametrized curve.

    Grid extrema per piece are refined by local bisection; positions are
    θ for H² leaves, x for E² leaves and the curve parameter otherwise.
    """
    if samples < 3:
        raise SamplingError("curvature scan needs at least 3 samples")
    try:
        extrema = scan_extrema(_pieces_for(target), samples)
    except AnalysisError:
        raise
    except FoliationError as e:
        raise AnalysisError(str(e)) from e
    return CurvatureScan(
        kappa_min=extrema.kappa_min,
        kappa_max=extrema.kappa_max,
        argmin=extrema.argmin,
        argmax=extrema.argmax,
        segment_min=extrema.segment_min,
        segment_max=extrema.segment_max,
        samples=samples,
    )


# ============================================================================
# Distortion
# ============================================================================

def _provenance(target: Target, plan) -> str:
    if isinstance(target, (LeafCurve, E2LeafCurve)):
        kind = "h2" if isinstance(target, LeafCurve) else "e2"
        scale = target.log_scale if isinstance(target, LeafCurve) else target.offset
        return f"{kind} leaf oracle={target.oracle} n_max={target.params.n_max} parameter={scale!r} plan={plan!r}"
    return f"curve {target!r} plan={plan!r}"


def _h2_samples(leaf: LeafCurve, plan: SymmetricPairPlan) -> List[DistortionSample]:
    samples = []
    indices = plan.indices if plan.indices is not None else tuple(range(len(leaf.anchors)))
    for n in indices:
        if not 0 <= n < len(leaf.anchors):
            raise AnalysisError(f"leaf domain too small for plan: no anchor n={n} (n_max={len(leaf.anchors) - 1})")
        theta = leaf.knot_angles[n]
        samples.append(
            DistortionSample(
                d_ambient=symmetric_pair_distance(theta),
                d_leaf=symmetric_arc_length(leaf, theta),
                label=f"symmetric pair at theta=delta/2^{n}",
                n=n,
                position=theta,
            )
        )
    for theta in plan.extra_positions:
        if not (leaf.theta_min <= theta <= math.pi / 2):
            raise AnalysisError(f"leaf domain too small for plan: theta={theta!r}")
        samples.append(
            DistortionSample(
                d_ambient=symmetric_pair_distance(theta),
                d_leaf=symmetric_arc_length(leaf, theta),
                label=f"symmetric pair at theta={theta!r}",
                position=theta,
            )
        )
    return samples


def _e2_samples(leaf: E2LeafCurve, plan: SymmetricPairPlan) -> List[DistortionSample]:
    samples = []
    indices = plan.indices if plan.indices is not None else tuple(range(len(leaf.anchors)))
    positions = []
    for n in indices:
        if not 0 <= n < len(leaf.anchors):
            raise AnalysisError(f"leaf domain too small for plan: no anchor n={n} (n_max={len(leaf.anchors) - 1})")
        positions.append((n, leaf.anchor_x(n)))
    for x in plan.extra_positions:
        if not (0.0 <= x <= leaf.x_max):
            raise AnalysisError(f"leaf domain too small for plan: x={x!r}")
        positions.append((None, float(x)))
    for n, x in positions:
        if x == 0.0:
            samples.append(DistortionSample(0.0, LogScalar.zero(), "vertex", n=n, position=x))
            continue
        height = LogScalar.from_log(e2_log_height(leaf, x))
        d_ambient = euc_distance(EPoint(-x, height), EPoint(x, height))
        d_leaf = e2_arc_length(leaf, x) * LogScalar.from_value(2.0)
        label = f"symmetric pair at x=K+L+{n}" if n is not None else f"symmetric pair at x={x!r}"
        samples.append(DistortionSample(d_ambient, d_leaf, label, n=n, position=x))
    return samples


def distortion_profile_e2(leaf: E2LeafCurve, plan: Optional[SymmetricPairPlan] = None) -> DistortionProfile:
    """Symmetric-pair profile of an E² leaf; positions are the anchor abscissae."""
    return distortion_profile(leaf, plan or SymmetricPairPlan())


def _curve_samples(curve, plan: DensePairPlan) -> List[DistortionSample]:
    samples = []
    s0, s1 = curve.domain
    for i, a in enumerate(plan.half_widths):
        lo, hi = plan.center - a, plan.center + a
        if a < 0 or lo < s0 or hi > s1:
            raise AnalysisError(f"curve domain too small for plan: half width {a!r}")
        if a == 0:
            samples.append(DistortionSample(0.0, LogScalar.zero(), "identical endpoints", n=i, position=0.0))
            continue
        p, q = HPoint.from_xy(*curve.point(lo)), HPoint.from_xy(*curve.point(hi))

        def speed(s: float) -> float:
            x, y, dx, dy, _, _ = _curve_derivatives(curve, s, "auto", settings.FD_STEP)
            return math.hypot(dx, dy) / y

        length = adaptive_quad(speed, lo, hi, f"leaf length for half width {a!r}")
        samples.append(
            DistortionSample(hyp_distance(p, q), LogScalar.from_value(length), f"pair at half width {a!r}", n=i, position=a)
        )
    return samples


def distortion_profile(target: Target, plan: Union[SymmetricPairPlan, DensePairPlan, None] = None) -> DistortionProfile:
    """
    Distortion samples of a leaf or curve under a sampling plan.

    Args:
        target: H² leaf, E² leaf, or a parametrized curve with a domain
        plan: SymmetricPairPlan for leaves (default), DensePairPlan for curves

    Returns:
        DistortionProfile sorted by ambient distance, carrying the curvature range
    """
    if plan is None:
        if not isinstance(target, (LeafCurve, E2LeafCurve)):
            raise AnalysisError("a parametrized curve needs a DensePairPlan")
        plan = SymmetricPairPlan()

    if isinstance(plan, SymmetricPairPlan):
        if plan.indices is not None and not plan.indices and not plan.extra_positions:
            raise AnalysisError("empty sampling plan")
        if isinstance(target, LeafCurve):
            samples = _h2_samples(target, plan)
        elif isinstance(target, E2LeafCurve):
            samples = _e2_samples(target, plan)
        else:
            raise AnalysisError("symmetric pairs need a constructed leaf")
        scan_samples = target.params.samples_per_segment
    else:
        if not plan.half_widths:
            raise AnalysisError("empty sampling plan")
        if isinstance(target, (LeafCurve, E2LeafCurve)):
            raise AnalysisError("dense pairs need a parametrized curve")
        samples = _curve_samples(target, plan)
        scan_samples = 1000

    scan = curvature_scan(target, scan_samples)
    saturated = sum(1 for s in samples if s.saturated)
    if saturated:
        logger.warning("%d of %d distortion samples are saturated", saturated, len(samples))
    ordered = tuple(sorted(samples, key=lambda s: (s.d_ambient, -1 if s.n is None else s.n)))
    return DistortionProfile(ordered, _provenance(target, plan), scan.kappa_min, scan.kappa_max)


def exponential_bound_check(profile: DistortionProfile) -> ExpBoundReport:
    """
    Compare each sample with the horocycle law d_leaf ≤ 2 sinh(d_ambient / 2).

    Only applies to curves with |κ| ≤ 1; otherwise the report is inapplicable.
    """
    tol = settings.CURVATURE_TOL
    if profile.kappa_max > 1.0 + tol:
        return ExpBoundReport(status="inapplicable", note="inapplicable: κ exceeds 1")
    if profile.kappa_min < -1.0 - tol:
        return ExpBoundReport(status="inapplicable", note="inapplicable: κ below -1")

    worst: Optional[float] = None
    checked = excluded = 0
    for sample in profile.samples:
        if sample.saturated:
            excluded += 1
            continue
        checked += 1
        half = 0.5 * sample.d_ambient
        if half > settings.SATURATION_LOG:
            continue
        bound = 2.0 * math.sinh(half)
        margin = bound - sample.d_leaf.value
        worst = margin if worst is None else min(worst, margin)

    note = f"{excluded} saturated samples excluded" if excluded else ""
    if worst is not None and worst < -settings.EXP_BOUND_SLACK:
        return ExpBoundReport(status="fail", worst_margin=worst, checked=checked, excluded_saturated=excluded, note=note)
    return ExpBoundReport(status="pass", worst_margin=worst, checked=checked, excluded_saturated=excluded, note=note)


def horocycle_distortion_law(a: float) -> Tuple[float, float]:
    """(d_leaf, d_ambient) = (2a, 2 arcsinh a) for the pair x = ±a on y = 1."""
    if not a > 0:
        raise AnalysisError(f"horocycle half width must be positive, got {a!r}")
    return 2.0 * a, 2.0 * math.asinh(a)


def growth_separation(profile: DistortionProfile, oracle: GrowthOracle) -> GrowthReport:
    """
    Check that leaf distance at anchor n outgrows the vertical travel
    2(ln rₙ − ln r₀) while the ambient distance grows only linearly in n.
    """
    rows = []
    base = None
    first_super: Optional[int] = None
    ln_r0 = log_radius(oracle, 0).value
    for sample in sorted((s for s in profile.samples if s.n is not None), key=lambda s: s.n):
        if sample.n == 0:
            base = sample.d_ambient
        ln_r = log_radius(oracle, sample.n)
        if ln_r.saturated or sample.saturated:
            continue
        vertical = 2.0 * (ln_r.value - ln_r0)
        separated = sample.d_leaf.value >= vertical - settings.DISTANCE_TOL
        ambient_ok = base is None or sample.d_ambient <= 2.0 * (sample.n + 1) * math.log(2.0) + base
        if first_super is None and sample.d_leaf.log_value > sample.d_ambient:
            first_super = sample.n
        rows.append(
            GrowthRow(
                n=sample.n,
                d_ambient=sample.d_ambient,
                log_d_leaf=sample.d_leaf.log_value,
                vertical_travel=vertical,
                separated=separated,
                ambient_bounded=ambient_ok,
            )
        )
    holds = all(r.separated and r.ambient_bounded for r in rows)
    return GrowthReport(rows=rows, holds=holds, first_superexponential=first_super)


# ============================================================================
# Basepoints
# ============================================================================

def _curve_frames(curve, params: np.ndarray):
    frames = []
    for s in params:
        x, y, dx, dy, _, _ = _curve_derivatives(curve, float(s), "auto", settings.FD_STEP)
        normal = UnitVector.normalized(-dy, dx)
        frames.append((HPoint.from_xy(x, y), normal, hyp_curvature(curve, float(s))))
    return frames


def basepoint_monotonicity(target: Target, samples: int) -> MonotonicityReport:
    """
    Track the boundary basepoint of the osculating horocycle along a curve.

    Requires κ ≥ 1 at every sample; angles must progress anticlockwise, and
    strictly wherever κ > 1.
    """
    if samples < 3:
        raise SamplingError("monotonicity check needs at least 3 samples")
    if isinstance(target, LeafCurve):
        # decreasing θ keeps the upward leaf normal on the left of travel
        params = np.linspace(math.pi - target.theta_min, target.theta_min, samples)
        closed = False
        try:
            frames = [leaf_frame(target, float(t)) for t in params]
        except SaturationError as e:
            return MonotonicityReport(
                parameters=[], angles=[], verdict="inapplicable", note=f"inapplicable: {e}"
            )
    elif isinstance(target, E2LeafCurve):
        return MonotonicityReport(parameters=[], angles=[], verdict="inapplicable", note="inapplicable: Euclidean leaf")
    else:
        params, _ = sample_curve(target, samples)
        closed = bool(getattr(target, "closed", False))
        frames = _curve_frames(target, params)

    tol = settings.CURVATURE_TOL
    kappas = np.array([f[2] for f in frames])
    if float(np.min(kappas)) < 1.0 - tol:
        i = int(np.argmin(kappas))
        return MonotonicityReport(
            parameters=[float(p) for p in params],
            angles=[],
            verdict="inapplicable",
            note=f"inapplicable: κ = {kappas[i]:.6g} < 1 at parameter {float(params[i])!r}",
        )

    angles = np.array([boundary_angle(osculating_horocycle(p, n).basepoint) for p, n, _ in frames])
    path = np.append(angles, angles[0]) if closed else angles
    unwrapped = np.unwrap(path)
    steps = np.diff(unwrapped)
    strict_needed = kappas > 1.0 + tol
    violation = None
    for i, step in enumerate(steps):
        needs_strict = strict_needed[i] and strict_needed[(i + 1) % len(kappas)]
        if step < -settings.ANGLE_TOL or (needs_strict and step <= settings.ANGLE_TOL):
            violation = i
            break
    winding = int(round((unwrapped[-1] - unwrapped[0]) / (2.0 * math.pi))) if closed else 0
    report = MonotonicityReport(
        parameters=[float(p) for p in params],
        angles=[float(a) for a in angles],
        verdict="violation" if violation is not None else "monotone_anticlockwise",
        violation_index=violation,
        winding=winding,
        strict=bool(np.all(steps > settings.ANGLE_TOL)),
    )
    logger.debug("basepoint monotonicity: %s (winding %d)", report.verdict, winding)
    return report


# ============================================================================
# Self-intersection
# ============================================================================

def _cross(ax, ay, bx, by) -> Fraction:
    return ax * by - ay * bx


def _orient(p, q, r) -> int:
    value = _cross(q[0] - p[0], q[1] - p[1], r[0] - p[0], r[1] - p[1])
    return (value > 0) - (value < 0)


def _on_segment(p, q, r) -> bool:
    """r on segment pq, given the three are collinear."""
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def _exact_crossing(p1, p2, q1, q2) -> Optional[Tuple[Fraction, Fraction]]:
    """Segment parameters (t, u) of a common point, or None."""
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 * o2 > 0 or o3 * o4 > 0:
        return None
    if o1 == o2 == o3 == o4 == 0:
        return _collinear_overlap(p1, p2, q1, q2)
    rx, ry = p2[0] - p1[0], p2[1] - p1[1]
    sx, sy = q2[0] - q1[0], q2[1] - q1[1]
    denom = _cross(rx, ry, sx, sy)
    wx, wy = q1[0] - p1[0], q1[1] - p1[1]
    return _cross(wx, wy, sx, sy) / denom, _cross(wx, wy, rx, ry) / denom


def _param_along(a, b, c) -> Fraction:
    dx, dy = b[0] - a[0], b[1] - a[1]
    if dx != 0:
        return (c[0] - a[0]) / dx
    if dy != 0:
        return (c[1] - a[1]) / dy
    return Fraction(0)


def _collinear_overlap(p1, p2, q1, q2) -> Optional[Tuple[Fraction, Fraction]]:
    for point in (p1, p2, q1, q2):
        if _on_segment(p1, p2, point) and _on_segment(q1, q2, point):
            return _param_along(p1, p2, point), _param_along(q1, q2, point)
    return None


def _branch_gap(curve, s: float, t: float) -> float:
    a, b = curve.point(s), curve.point(t)
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _refine_crossing(curve, s_guess: float, t_guess: float, min_gap: float):
    """Root-solve γ(s) = γ(t) near the polyline crossing; judged by the re-evaluated gap alone."""

    def residual(v):
        a, b = curve.point(float(v[0])), curve.point(float(v[1]))
        return [a[0] - b[0], a[1] - b[1]]

    # hybr flags success=False when xtol is below what it can resolve, even at a root
    solution = optimize.root(residual, [s_guess, t_guess], method="hybr", tol=1e-14)
    s, t = float(solution.x[0]), float(solution.x[1])
    s0, s1 = getattr(curve, "domain", (-math.inf, math.inf))
    if not (s0 <= s <= s1 and s0 <= t <= s1) or abs(s - t) < min_gap:
        return None
    gap = _branch_gap(curve, s, t)
    if gap > settings.CROSSING_RESIDUAL_TOL:
        return None
    return s, t, gap


def self_intersection(
    points: Sequence[Sequence[float]],
    tolerance: float,
    params: Optional[Sequence[float]] = None,
    curve=None,
) -> IntersectionReport:
    """
    First crossing between non-adjacent segments of a sampled polyline.

    Segments are swept in order of their left end, screened by bounding boxes
    and decided by exact rational orientation tests. The lowest segment pair
    wins. With params and a curve, the crossing is refined with a root solve.

    Args:
        points: polyline vertices, shape (n, 2)
        tolerance: spacing scale; adjacent vertices must be closer than 10x this
        params: curve parameter at each vertex (defaults to the vertex index)
        curve: parametrized curve used to refine the crossing

    Returns:
        IntersectionReport with the verified crossing when one is found
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise AnalysisError("self intersection needs an (n, 2) array of at least two points")
    if not np.all(np.isfinite(pts)):
        raise AnalysisError("polyline has non-finite vertices")
    spacing = np.hypot(*np.diff(pts, axis=0).T)
    if float(np.max(spacing)) >= 10.0 * tolerance:
        raise SamplingError(
            f"adjacent spacing {float(np.max(spacing)):.3g} exceeds 10 x tolerance {tolerance:g}; sample more densely"
        )
    params = np.arange(len(pts), dtype=float) if params is None else np.asarray(params, dtype=float)

    n_seg = len(pts) - 1
    xmin = np.minimum(pts[:-1, 0], pts[1:, 0])
    xmax = np.maximum(pts[:-1, 0], pts[1:, 0])
    ymin = np.minimum(pts[:-1, 1], pts[1:, 1])
    ymax = np.maximum(pts[:-1, 1], pts[1:, 1])
    order = np.argsort(xmin, kind="stable")

    exact = {}

    def vertex(k: int):
        if k not in exact:
            exact[k] = (Fraction(float(pts[k, 0])), Fraction(float(pts[k, 1])))
        return exact[k]

    best = None
    for pos, i in enumerate(order):
        for j in order[pos + 1:]:
            if xmin[j] > xmax[i]:
                break
            a, b = (int(i), int(j)) if i < j else (int(j), int(i))
            if b - a <= 1 or (best is not None and (a, b) >= best[0]):
                continue
            if ymin[j] > ymax[i] or ymin[i] > ymax[j]:
                continue
            hit = _exact_crossing(vertex(a), vertex(a + 1), vertex(b), vertex(b + 1))
            if hit is not None:
                best = ((a, b), hit)

    if best is None:
        return IntersectionReport(found=False)

    (a, b), (t, u) = best
    s = float(params[a] + float(t) * (params[a + 1] - params[a]))
    s_prime = float(params[b] + float(u) * (params[b + 1] - params[b]))
    pa = pts[a] + float(t) * (pts[a + 1] - pts[a])
    pb = pts[b] + float(u) * (pts[b + 1] - pts[b])
    report = IntersectionReport(
        found=True,
        segments=(a, b),
        parameters=(s, s_prime),
        point=(float(pa[0]), float(pa[1])),
        residual=float(np.hypot(*(pa - pb))),
    )
    if curve is not None:
        min_gap = float(np.min(np.abs(np.diff(params))))
        refined = _refine_crossing(curve, s, s_prime, min_gap)
        if refined is not None:
            s, s_prime, gap = refined
            x, y = curve.point(s)
            report = IntersectionReport(
                found=True, segments=(a, b), parameters=(s, s_prime), point=(x, y), residual=gap, refined=True
            )
        else:
            # unrefined: report how far apart the two curve branches really are
            report = report.model_copy(update={"residual": _branch_gap(curve, s, s_prime)})
    logger.debug("self intersection between segments %d and %d", a, b)
    return report


def leaf_self_intersection(leaf: Union[LeafCurve, E2LeafCurve], samples: int, tolerance: float = 1e-3) -> IntersectionReport:
    """Self-intersection test of a leaf in the chart (θ, asinh ρ) for H² or (x, asinh y) for E²."""
    if isinstance(leaf, E2LeafCurve):
        params, points = e2_polyline(leaf, samples)
    else:
        params, points = leaf_polyline(leaf, samples)
    return self_intersection(points, tolerance, params=params)


def curve_self_intersection(curve, samples: int, tolerance: float = 1e-3) -> IntersectionReport:
    params, points = sample_curve(curve, samples)
    return self_intersection(points, tolerance, params=params, curve=curve)

"""
Geometry kernel for the upper half-plane model of H².

Heights are carried as natural logs (HPoint.log_y, PolarPoint.log_r) so that
points far out on a leaf stay representable. Distances are assembled from
log-domain parts and only exponentiated once the result is known to be small.
"""
import logging
import math
from dataclasses import dataclass
from typing import Protocol, Tuple, Union, runtime_checkable

import numpy as np

from .config import settings
from .errors import CurveError, DomainError, SaturationError

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


@dataclass(frozen=True, order=True)
class LogScalar:
    """A nonnegative magnitude held as its natural log."""

    log_value: float
    saturated: bool = False

    @classmethod
    def from_log(cls, log_value: float, saturated: bool = False) -> "LogScalar":
        log_value = float(log_value)
        if math.isnan(log_value):
            raise DomainError("log magnitude is NaN")
        if saturated or log_value > settings.SATURATION_LOG:
            return cls(settings.SATURATION_LOG, True)
        return cls(log_value, False)

    @classmethod
    def from_value(cls, value: Union[int, float]) -> "LogScalar":
        if value < 0:
            raise DomainError(f"negative magnitude {value!r}")
        if value == 0:
            return cls.zero()
        # math.log accepts arbitrarily large ints
        return cls.from_log(math.log(value))

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls(-math.inf, False)

    @property
    def is_zero(self) -> bool:
        return self.log_value == -math.inf

    @property
    def value(self) -> float:
        if self.saturated:
            raise SaturationError("magnitude exceeds the representable range")
        return math.exp(self.log_value)

    def __mul__(self, other: "LogScalar") -> "LogScalar":
        return LogScalar.from_log(self.log_value + other.log_value, self.saturated or other.saturated)

    def __add__(self, other: "LogScalar") -> "LogScalar":
        total = float(np.logaddexp(self.log_value, other.log_value))
        return LogScalar.from_log(total, self.saturated or other.saturated)

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class HPoint:
    """Point of the upper half-plane with log-carried height."""

    x: float
    log_y: float
    saturated: bool = False

    @classmethod
    def from_xy(cls, x: float, y: float) -> "HPoint":
        if not y > 0:
            raise DomainError(f"height must be positive, got {y!r}")
        return cls(float(x), math.log(y))

    @property
    def y(self) -> float:
        if self.saturated or self.log_y > settings.SATURATION_LOG:
            raise SaturationError("height exceeds the representable range")
        return math.exp(self.log_y)


@dataclass(frozen=True)
class PolarPoint:
    theta: float
    log_r: float

    def __post_init__(self):
        if not (0.0 < self.theta < math.pi):
            raise DomainError(f"polar angle must lie in (0, pi), got {self.theta!r}")


@dataclass(frozen=True)
class UnitVector:
    ux: float
    uy: float

    def __post_init__(self):
        if abs(math.hypot(self.ux, self.uy) - 1.0) > settings.UNIT_VECTOR_TOL:
            raise DomainError(f"not a unit vector: ({self.ux!r}, {self.uy!r})")

    @classmethod
    def normalized(cls, ux: float, uy: float) -> "UnitVector":
        norm = math.hypot(ux, uy)
        if norm == 0.0 or not math.isfinite(norm):
            raise DomainError("cannot normalize a zero or non-finite vector")
        return cls(ux / norm, uy / norm)


@dataclass(frozen=True)
class Horocycle:
    """
    Horocycle of the half-plane.

    For a finite basepoint, log_scale is the log of the Euclidean diameter of
    the circle tangent to the real axis there; for the basepoint at infinity it
    is the log of the height of the horizontal line.
    """

    basepoint: float
    log_scale: float

    @property
    def at_infinity(self) -> bool:
        return math.isinf(self.basepoint)

    @property
    def center(self) -> Tuple[float, float]:
        if self.at_infinity:
            raise DomainError("a horocycle based at infinity has no center")
        radius = 0.5 * math.exp(self.log_scale)
        return (self.basepoint, radius)

    def contains(self, p: HPoint, tol: float = settings.DISTANCE_TOL) -> bool:
        """True when p lies on the horocycle, to a relative tolerance."""
        if self.at_infinity:
            return abs(p.log_y - self.log_scale) <= tol
        cx, radius = self.center
        dist = math.hypot(p.x - cx, p.y - radius)
        return abs(dist - radius) <= tol * max(1.0, radius)


def horocycle_from_basepoint(basepoint: float, through: HPoint) -> Horocycle:
    """The horocycle with the given basepoint passing through a point."""
    if math.isinf(basepoint):
        return Horocycle(math.inf, through.log_y)
    # Circle tangent at (b, 0) through (x, y): diameter = ((x-b)^2 + y^2) / y
    dx = through.x - basepoint
    log_diameter = float(np.logaddexp(2.0 * _safe_log(abs(dx)), 2.0 * through.log_y)) - through.log_y
    return Horocycle(float(basepoint), log_diameter)


@runtime_checkable
class PlaneCurve(Protocol):
    """Parametrized curve in the half-plane with its positive side on the left."""

    def point(self, s: float) -> Tuple[float, float]:
        ...


def _safe_log(value: float) -> float:
    return math.log(value) if value > 0 else -math.inf


def _log_abs_difference(log_a: float, log_b: float) -> float:
    """ln|a − b| from ln a and ln b."""
    if log_a == log_b:
        return -math.inf
    hi, lo = max(log_a, log_b), min(log_a, log_b)
    return hi + math.log(-math.expm1(lo - hi))


def _arccosh_one_plus(log_u: float) -> float:
    """arccosh(1 + u) from ln u without forming 1 + u."""
    if log_u == -math.inf:
        return 0.0
    if log_u > 0.0:
        inv = math.exp(-log_u)
        return log_u + math.log(1.0 + inv + math.sqrt(1.0 + 2.0 * inv))
    u = math.exp(log_u)
    return math.log1p(u + math.sqrt(u * u + 2.0 * u))


def hyp_distance(p: HPoint, q: HPoint) -> float:
    """
    Hyperbolic distance in the half-plane.

    Computes arccosh(1 + (Δx² + Δy²) / (2 y_p y_q)) with the fraction formed
    in the log domain.
    """
    if p.saturated or q.saturated:
        raise SaturationError("distance between points beyond the representable range")
    log_dx = _safe_log(abs(p.x - q.x))
    log_dy = _log_abs_difference(p.log_y, q.log_y)
    log_num = float(np.logaddexp(2.0 * log_dx, 2.0 * log_dy))
    log_u = log_num - LN2 - p.log_y - q.log_y
    return _arccosh_one_plus(log_u)


def symmetric_pair_distance(theta: float) -> float:
    """Distance between (r, θ) and (r, π − θ); the same for every r."""
    if not (0.0 < theta <= math.pi / 2):
        raise DomainError(f"symmetric pair angle must lie in (0, pi/2], got {theta!r}")
    # arccosh(1 + 2a²) = 2 arcsinh(a)
    return 2.0 * math.asinh(math.cos(theta) / math.sin(theta))


def polar_to_hpoint(p: PolarPoint) -> HPoint:
    log_y = p.log_r + math.log(math.sin(p.theta))
    if p.log_r > settings.SATURATION_LOG:
        logger.debug("polar point at log_r=%.6g saturates its x coordinate", p.log_r)
        x = math.copysign(math.exp(settings.SATURATION_LOG), math.cos(p.theta))
        return HPoint(x, log_y, True)
    return HPoint(math.exp(p.log_r) * math.cos(p.theta), log_y)


def hpoint_to_polar(p: HPoint) -> PolarPoint:
    if p.log_y > 0.0:
        theta = math.atan2(1.0, p.x * math.exp(-p.log_y))
    else:
        theta = math.atan2(math.exp(p.log_y), p.x)
    return PolarPoint(theta, p.log_y - math.log(math.sin(theta)))


def dilate(p: Union[HPoint, PolarPoint], log_t: float) -> Union[HPoint, PolarPoint]:
    """Image under z ↦ t·z with t = exp(log_t)."""
    if isinstance(p, PolarPoint):
        return PolarPoint(p.theta, p.log_r + log_t)
    if log_t == 0.0:
        return p
    x = p.x * math.exp(log_t)
    saturated = p.saturated or not math.isfinite(x)
    return HPoint(x, p.log_y + log_t, saturated)


def _curve_derivatives(curve: PlaneCurve, s: float, method: str, h: float):
    """(x, y, x', y', x'', y'') at s, analytic when the curve provides them."""
    x, y = curve.point(s)
    if method == "analytic" or (method == "auto" and hasattr(curve, "derivatives")):
        if not hasattr(curve, "derivatives"):
            raise CurveError("curve has no analytic derivatives")
        dx, dy, ddx, ddy = curve.derivatives(s)
        return x, y, dx, dy, ddx, ddy

    # First pass fixes the parameter step to h of arc length.
    xp, yp = curve.point(s + h)
    xm, ym = curve.point(s - h)
    speed = math.hypot(xp - xm, yp - ym) / (2.0 * h)
    if not speed > 0.0:
        raise CurveError(f"zero-speed parametrization at s={s!r}")
    k = h / speed

    pts = np.array([curve.point(s + j * k) for j in (-2, -1, 0, 1, 2)], dtype=float)
    if not np.all(np.isfinite(pts)):
        raise CurveError(f"non-finite curve sample near s={s!r}")
    dx, dy = (pts[3] - pts[1]) / (2.0 * k)
    ddx, ddy = (pts[3] - 2.0 * pts[2] + pts[1]) / (k * k)
    fwd = (pts[4] - 2.0 * pts[3] + pts[2]) / (k * k)
    bwd = (pts[2] - 2.0 * pts[1] + pts[0]) / (k * k)
    jump = np.abs(fwd - bwd)
    if np.any(jump > 1e-2 * (1.0 + np.abs([ddx, ddy])) * max(1.0, speed * speed)):
        raise CurveError(f"non-differentiable sample window at s={s!r}")
    return x, y, dx, dy, ddx, ddy


def hyp_curvature(curve: PlaneCurve, s: float, method: str = "auto", h: float = settings.FD_STEP) -> float:
    """
    Signed geodesic curvature in H² at parameter s.

    Positive side is the left of the direction of travel, so the line y = 1
    traversed rightwards has curvature +1. method is "analytic", "fd"
    (central differences with step h of arc length) or "auto".
    """
    x, y, dx, dy, ddx, ddy = _curve_derivatives(curve, s, method, h)
    speed = math.hypot(dx, dy)
    if speed < 1e-14:
        raise CurveError(f"zero-speed parametrization at s={s!r}")
    if y <= 0:
        raise DomainError(f"curve leaves the half-plane at s={s!r}")
    kappa_euc = (dx * ddy - dy * ddx) / speed**3
    normal_y = dx / speed
    return y * kappa_euc + normal_y


def osculating_horocycle(p: HPoint, normal: UnitVector) -> Horocycle:
    """The horocycle tangent at p on the side the normal points to."""
    if p.saturated:
        raise SaturationError("osculating horocycle of a saturated point")
    if abs(1.0 - normal.uy) <= settings.VERTICAL_NORMAL_TOL:
        return Horocycle(math.inf, p.log_y)
    log_radius = p.log_y - math.log(1.0 - normal.uy)
    basepoint = p.x + math.exp(log_radius) * normal.ux
    return Horocycle(basepoint, log_radius + LN2)


def boundary_angle(b: float) -> float:
    """Angle in (−π, π] of the Cayley image (b − i)/(b + i) of a boundary point."""
    if math.isinf(b):
        return 0.0
    angle = -2.0 * math.atan2(1.0, b)
    if angle <= -math.pi:
        angle += 2.0 * math.pi
    return angle

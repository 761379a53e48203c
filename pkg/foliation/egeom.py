"""
Euclidean counterpart of the geometry kernel: curvature and arc length of
function graphs, and distances between points whose heights may be
log-carried.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy import integrate

from .config import settings
from .errors import CurveError, DomainError, QuadratureError, SaturationError
from .hgeom import LogScalar, _log_abs_difference, _safe_log

logger = logging.getLogger(__name__)

Func = Callable[[float], float]


@dataclass(frozen=True)
class EPoint:
    x: float
    y: Union[float, LogScalar]

    def __post_init__(self):
        if not math.isfinite(self.x):
            raise DomainError(f"non-finite x coordinate {self.x!r}")
        if isinstance(self.y, LogScalar) and self.y.is_zero:
            raise DomainError("log-carried height must be positive")

    @property
    def log_height(self) -> float:
        if isinstance(self.y, LogScalar):
            return self.y.log_value
        if self.y <= 0:
            raise DomainError("log height of a nonpositive coordinate")
        return math.log(self.y)

    @property
    def saturated(self) -> bool:
        return isinstance(self.y, LogScalar) and self.y.saturated


def adaptive_quad(f: Func, a: float, b: float, label: str) -> float:
    """
    scipy.integrate.quad with the toolkit tolerances.

    Non-convergence is accepted only when the error estimate is still tiny;
    otherwise QuadratureError carries the diagnostics.
    """
    result = integrate.quad(
        f,
        a,
        b,
        epsabs=settings.QUAD_ABS_TOL,
        epsrel=settings.QUAD_REL_TOL,
        limit=settings.QUAD_LIMIT,
        full_output=1,
    )
    value, abserr = float(result[0]), float(result[1])
    if not math.isfinite(value):
        raise QuadratureError(f"{label}: non-finite integral on [{a!r}, {b!r}]")
    if len(result) > 3:
        tolerance = max(1e2 * settings.QUAD_ABS_TOL, 1e-9 * abs(value))
        if abserr > tolerance:
            message = str(result[3]).strip().splitlines()[0]
            raise QuadratureError(
                f"{label}: {message} (estimate={value:.12g}, abserr={abserr:.3g}, "
                f"evaluations={result[2]['neval']}, interval=[{a!r}, {b!r}])"
            )
        logger.debug("%s: quad warning tolerated, abserr=%.3g", label, abserr)
    return value


def _central_derivatives(phi: Func, x: float, h: float):
    k = h
    vals = np.array([phi(x + j * k) for j in (-2, -1, 0, 1, 2)], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise CurveError(f"non-finite graph value near x={x!r}")
    d1 = (vals[3] - vals[1]) / (2.0 * k)
    d2 = (vals[3] - 2.0 * vals[2] + vals[1]) / (k * k)
    fwd = (vals[4] - 2.0 * vals[3] + vals[2]) / (k * k)
    bwd = (vals[2] - 2.0 * vals[1] + vals[0]) / (k * k)
    if abs(fwd - bwd) > 1e-2 * (1.0 + abs(d2)):
        raise CurveError(f"non-differentiable point x={x!r}")
    return d1, d2


def euc_curvature_graph(
    phi: Func,
    x: float,
    dphi: Optional[Func] = None,
    d2phi: Optional[Func] = None,
    h: float = settings.FD_STEP,
) -> float:
    """φ''/(1 + φ'²)^{3/2}; derivatives are taken by central differences unless given."""
    if dphi is not None and d2phi is not None:
        d1, d2 = float(dphi(x)), float(d2phi(x))
    else:
        d1, d2 = _central_derivatives(phi, x, h)
    return d2 / (1.0 + d1 * d1) ** 1.5


def euc_distance(p: EPoint, q: EPoint) -> float:
    if not isinstance(p.y, LogScalar) and not isinstance(q.y, LogScalar):
        return math.hypot(p.x - q.x, p.y - q.y)
    if p.saturated or q.saturated:
        raise SaturationError("distance between points beyond the representable range")
    log_dx = _safe_log(abs(p.x - q.x))
    log_dy = _log_abs_difference(p.log_height, q.log_height)
    log_d = 0.5 * float(np.logaddexp(2.0 * log_dx, 2.0 * log_dy))
    if log_d > settings.SATURATION_LOG:
        raise SaturationError("Euclidean distance exceeds the representable range")
    return math.exp(log_d)


def _numeric_slope(phi: Func, h: float = settings.FD_STEP) -> Func:
    def slope(x: float) -> float:
        return (phi(x + h) - phi(x - h)) / (2.0 * h)

    return slope


def graph_arc_length(phi: Func, a: float, b: float, dphi: Optional[Func] = None) -> float:
    """
    Length of the graph of φ over [a, b].

    Monotone steep stretches are integrated as vertical travel plus the
    bounded excess 1/(|φ'| + √(1+φ'²)), which is the y-variable integral
    written over x.
    """
    if a > b:
        raise DomainError(f"arc length needs a <= b, got [{a!r}, {b!r}]")
    if a == b:
        return 0.0
    slope = dphi if dphi is not None else _numeric_slope(phi)
    rise = abs(phi(b) - phi(a))

    slopes = np.array([slope(x) for x in np.linspace(a, b, 65)], dtype=float)
    monotone = bool(np.all(slopes >= 0.0) or np.all(slopes <= 0.0))
    if monotone and float(np.max(np.abs(slopes))) > 1.0:
        excess = adaptive_quad(
            lambda x: 1.0 / (abs(slope(x)) + math.sqrt(1.0 + slope(x) ** 2)),
            a,
            b,
            "graph arc length (vertical form)",
        )
        length = rise + excess
    else:
        length = adaptive_quad(lambda x: math.sqrt(1.0 + slope(x) ** 2), a, b, "graph arc length")
    return max(length, rise, b - a)

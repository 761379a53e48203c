"""
Named analytic test curves in the upper half-plane.

Each curve exposes point(s), analytic first and second derivatives, its
parameter domain and whether it closes up. The positive side is the left of
the direction of travel.
"""
import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class HorocycleLine:
    """The horocycle y = height traversed to the right."""

    height: float = 1.0
    domain: Tuple[float, float] = (-5.0, 5.0)
    closed: bool = False

    def point(self, s: float) -> Tuple[float, float]:
        return (s, self.height)

    def derivatives(self, s: float) -> Tuple[float, float, float, float]:
        return (1.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class GeodesicSemicircle:
    """|z| = radius, traversed anticlockwise."""

    radius: float = 1.0
    domain: Tuple[float, float] = (0.2, math.pi - 0.2)
    closed: bool = False

    def point(self, s: float) -> Tuple[float, float]:
        return (self.radius * math.cos(s), self.radius * math.sin(s))

    def derivatives(self, s: float) -> Tuple[float, float, float, float]:
        c, sn = math.cos(s), math.sin(s)
        return (-self.radius * sn, self.radius * c, -self.radius * c, -self.radius * sn)


@dataclass(frozen=True)
class EuclideanRay:
    """Ray from the origin at angle `angle` to the real axis, traversed outwards."""

    angle: float = math.pi / 3
    domain: Tuple[float, float] = (0.1, 10.0)
    closed: bool = False

    def point(self, s: float) -> Tuple[float, float]:
        return (s * math.cos(self.angle), s * math.sin(self.angle))

    def derivatives(self, s: float) -> Tuple[float, float, float, float]:
        return (math.cos(self.angle), math.sin(self.angle), 0.0, 0.0)


@dataclass(frozen=True)
class HyperbolicCircle:
    """Euclidean circle strictly inside the half-plane, traversed anticlockwise."""

    center_height: float = 2.0
    radius: float = 1.0
    domain: Tuple[float, float] = (0.0, 2.0 * math.pi)
    closed: bool = True

    def __post_init__(self):
        if not self.radius < self.center_height:
            raise DomainError("hyperbolic circle must lie strictly inside the half-plane")

    def point(self, s: float) -> Tuple[float, float]:
        return (self.radius * math.cos(s), self.center_height + self.radius * math.sin(s))

    def derivatives(self, s: float) -> Tuple[float, float, float, float]:
        c, sn = math.cos(s), math.sin(s)
        return (-self.radius * sn, self.radius * c, -self.radius * c, -self.radius * sn)


@dataclass(frozen=True)
class FigureEight:
    """(sin s, sin s cos s) lifted to height `lift`; crosses itself at s = 0 and s = π."""

    lift: float = 2.0
    domain: Tuple[float, float] = (-1.0, 2.0 * math.pi - 1.5)
    closed: bool = False

    def point(self, s: float) -> Tuple[float, float]:
        return (math.sin(s), self.lift + math.sin(s) * math.cos(s))

    def derivatives(self, s: float) -> Tuple[float, float, float, float]:
        return (math.cos(s), math.cos(2.0 * s), -math.sin(s), -2.0 * math.sin(2.0 * s))


@dataclass(frozen=True)
class LoopedLimacon:
    """r = 0.5 + cos s about (0, lift); the inner loop crosses at the pole."""

    lift: float = 2.0
    domain: Tuple[float, float] = (0.2, 2.0 * math.pi - 0.2)
    closed: bool = False

    def point(self, s: float) -> Tuple[float, float]:
        r = 0.5 + math.cos(s)
        return (r * math.cos(s), self.lift + r * math.sin(s))

    def derivatives(self, s: float) -> Tuple[float, float, float, float]:
        c, sn = math.cos(s), math.sin(s)
        r, dr, ddr = 0.5 + c, -sn, -c
        dx = dr * c - r * sn
        dy = dr * sn + r * c
        ddx = ddr * c - 2.0 * dr * sn - r * c
        ddy = ddr * sn + 2.0 * dr * c - r * sn
        return (dx, dy, ddx, ddy)


NAMED_CURVES: Dict[str, object] = {
    "horocycle": HorocycleLine(),
    "geodesic": GeodesicSemicircle(),
    "ray": EuclideanRay(),
    "hyperbolic-circle": HyperbolicCircle(),
    "figure-eight": FigureEight(),
    "limacon": LoopedLimacon(),
}


def get_curve(name: str):
    try:
        return NAMED_CURVES[name]
    except KeyError:
        raise DomainError(f"unknown test curve {name!r}; choose from {', '.join(sorted(NAMED_CURVES))}") from None


def sample_curve(curve, samples: int) -> Tuple[np.ndarray, np.ndarray]:
    """Parameter grid and points; closed curves omit the repeated endpoint."""
    s0, s1 = curve.domain
    params = np.linspace(s0, s1, samples, endpoint=not getattr(curve, "closed", False))
    points = np.array([curve.point(float(s)) for s in params], dtype=float)
    return params, points

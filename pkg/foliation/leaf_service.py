"""
Leaf Construction Service

Builds the two leaves and the families they generate:

- the H² leaf: the horocycle y = 1 on [δ, π − δ] with near-radial spikes
  towards the boundary, mirrored about the imaginary axis, curvature pinched
  in [1 − ε, 1 + ε];
- the E² leaf: the parabola δx² on |x| ≤ K, a lead-in turn and a nearly
  vertical tail through the anchors, curvature bounded by ε.

Spikes are quintic Hermite pieces θ = Θ(ρ) in the (θ, ρ = ln r) chart. The E²
turn is stored as x = g(y) and the tail as x = g(η) with η = ln y.
"""
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from .config import settings
from .egeom import EPoint, adaptive_quad
from .errors import ConfigError, ConstructionError, DomainError, SaturationError
from .growth import GrowthOracle, log_radius
from .hgeom import HPoint, LogScalar, PolarPoint, UnitVector, hpoint_to_polar, polar_to_hpoint

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi


# ============================================================================
# Parameters and interpolants
# ============================================================================

@dataclass(frozen=True)
class ConstructionParams:
    delta: float = settings.DEFAULT_DELTA
    epsilon: float = settings.DEFAULT_EPSILON
    K: float = settings.DEFAULT_K
    n_max: int = settings.DEFAULT_N_MAX
    samples_per_segment: int = settings.DEFAULT_SAMPLES

    def __post_init__(self):
        if not (0.0 < self.delta < math.pi / 4):
            raise ConfigError("delta must satisfy 0 < delta < pi/4")
        if not (0.0 < self.epsilon < 1.0):
            raise ConfigError("epsilon must satisfy 0 < epsilon < 1")
        if not self.K > 0.0:
            raise ConfigError("K must be positive")
        if self.n_max < 0:
            raise ConfigError("n_max must be nonnegative")
        if self.samples_per_segment < 8:
            raise ConfigError("samples_per_segment must be at least 8")


# Power-basis coefficients (ascending in s) of the six quintic Hermite basis
# functions, rows ordered as v0, h*d0, h²*c0, h²*c1, h*d1, v1.
_HERMITE_BASIS = np.array(
    [
        [1.0, 0.0, 0.0, -10.0, 15.0, -6.0],
        [0.0, 1.0, 0.0, -6.0, 8.0, -3.0],
        [0.0, 0.0, 0.5, -1.5, 1.5, -0.5],
        [0.0, 0.0, 0.0, 0.5, -1.0, 0.5],
        [0.0, 0.0, 0.0, -4.0, 7.0, -3.0],
        [0.0, 0.0, 0.0, 10.0, -15.0, 6.0],
    ]
)


@dataclass(frozen=True)
class HermiteQuintic:
    """Quintic on [t0, t1] matching value, slope and second derivative at both ends."""

    t0: float
    t1: float
    v0: float
    v1: float
    d0: float
    d1: float
    c0: float
    c1: float

    @property
    def width(self) -> float:
        return self.t1 - self.t0

    @cached_property
    def _coefficients(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        h = self.width
        data = np.array([self.v0, h * self.d0, h * h * self.c0, h * h * self.c1, h * self.d1, self.v1])
        c = data @ _HERMITE_BASIS
        dc = np.polynomial.polynomial.polyder(c)
        ddc = np.polynomial.polynomial.polyder(dc)
        return c, dc, ddc

    def __call__(self, t, order: int = 0):
        """Value (order 0) or derivative of order 1 or 2 with respect to t."""
        h = self.width
        s = (np.asarray(t, dtype=float) - self.t0) / h
        coeffs = self._coefficients[order]
        return np.polynomial.polynomial.polyval(s, coeffs) / h**order

    def value_at(self, t: float) -> float:
        """Value with the stored knot values returned exactly at the ends."""
        if t == self.t0:
            return self.v0
        if t == self.t1:
            return self.v1
        return float(self(t))

    def invert(self, target: float) -> float:
        """Parameter where a monotone piece takes the value target."""
        if target == self.v0:
            return self.t0
        if target == self.v1:
            return self.t1
        return optimize.brentq(
            lambda t: self.value_at(t) - target, self.t0, self.t1, xtol=1e-13, rtol=4 * np.finfo(float).eps
        )


# ============================================================================
# H² leaf
# ============================================================================

@dataclass(frozen=True)
class SpikeSegment:
    """Spike n: θ = Θ(ρ) between anchors n and n+1, θ running from δ/2ⁿ to δ/2ⁿ⁺¹."""

    index: int
    curve: HermiteQuintic

    @property
    def label(self) -> str:
        return f"spike[{self.index}]"

    @property
    def theta_hi(self) -> float:
        return self.curve.v0

    @property
    def theta_lo(self) -> float:
        return self.curve.v1

    def rho_at(self, theta: float) -> float:
        return self.curve.invert(theta)


@dataclass(frozen=True)
class LeafCurve:
    """
    The H² leaf r = φ(θ), held as ρ = ln φ.

    The core is the horocycle ρ = −ln sin θ on [δ, π − δ]; spikes cover
    [δ/2^{n_max}, δ] and the left half is the mirror image ρ(θ) = ρ(π − θ).
    log_scale is the dilation parameter of the leaf within its family.
    """

    params: ConstructionParams
    oracle: str
    anchors: Tuple[float, ...]
    spikes: Tuple[SpikeSegment, ...]
    log_scale: float = 0.0
    mirror: bool = True

    @property
    def knot_angles(self) -> Tuple[float, ...]:
        return tuple(self.params.delta / 2**n for n in range(len(self.anchors)))

    @property
    def theta_min(self) -> float:
        return self.params.delta / 2 ** (len(self.anchors) - 1)

    @property
    def segment_count(self) -> int:
        return 1 + 2 * len(self.spikes)

    def spike_for(self, theta: float) -> SpikeSegment:
        for spike in self.spikes:
            if spike.theta_lo <= theta <= spike.theta_hi:
                return spike
        raise DomainError(f"theta={theta!r} is not covered by any spike")


def _fold(leaf: LeafCurve, theta: float) -> Tuple[float, bool]:
    lo = leaf.theta_min
    if not (lo <= theta <= math.pi - lo):
        raise DomainError(f"theta={theta!r} outside the constructed domain [{lo!r}, pi - {lo!r}]")
    if theta > HALF_PI:
        # π − θ can round just below θ_min at the mirrored endpoint
        return max(math.pi - theta, lo), True
    return theta, False


def core_curvature(theta):
    """Curvature of the graph ρ = −ln sin θ, evaluated from the general graph formula."""
    theta = np.asarray(theta, dtype=float)
    sin, cos = np.sin(theta), np.cos(theta)
    d1 = -cos / sin
    d2 = 1.0 / (sin * sin)
    w = np.sqrt(1.0 + d1 * d1)
    return sin * d2 / w**3 - d1 * cos / w


def spike_curvature(curve: HermiteQuintic, rho):
    theta = curve(rho)
    d1 = curve(rho, 1)
    d2 = curve(rho, 2)
    w = np.sqrt(1.0 + d1 * d1)
    return np.cos(theta) / w + np.sin(theta) * d2 / w**3


def _base_rho(leaf: LeafCurve, theta: float) -> float:
    folded, _ = _fold(leaf, theta)
    delta = leaf.params.delta
    if folded == delta:
        return leaf.anchors[0]
    if folded > delta:
        return -math.log(math.sin(folded))
    for n, angle in enumerate(leaf.knot_angles):
        if folded == angle:
            return leaf.anchors[n]
    return leaf.spike_for(folded).rho_at(folded)


def eval_leaf(leaf: LeafCurve, theta: float) -> float:
    """ρ(θ) = ln r of the leaf at polar angle θ."""
    return _base_rho(leaf, theta) + leaf.log_scale


def _h2_anchors(params: ConstructionParams, oracle: GrowthOracle) -> Tuple[float, ...]:
    ln_r = []
    for n in range(params.n_max + 1):
        value = log_radius(oracle, n)
        if value.saturated:
            raise ConstructionError(
                f"oracle {oracle.describe()} saturates at n={n}; lower n_max", segment=f"anchor[{n}]"
            )
        ln_r.append(value.value)
    rho0 = -math.log(math.sin(params.delta))
    shift = rho0 - ln_r[0]
    return tuple([rho0] + [v + shift for v in ln_r[1:]])


def _harmonic_mean(a: float, b: float) -> float:
    return 2.0 * a * b / (a + b)


def _initial_knots(secants: Sequence[float], first_slope: float, first_second: float):
    slopes = [first_slope]
    seconds = [first_second]
    for k in range(1, len(secants)):
        slopes.append(_harmonic_mean(secants[k - 1], secants[k]))
        seconds.append(0.0)
    slopes.append(secants[-1])
    seconds.append(0.0)
    return slopes, seconds


def _assemble_spikes(thetas, anchors, slopes, seconds) -> Tuple[SpikeSegment, ...]:
    return tuple(
        SpikeSegment(
            n,
            HermiteQuintic(
                t0=anchors[n],
                t1=anchors[n + 1],
                v0=thetas[n],
                v1=thetas[n + 1],
                d0=slopes[n],
                d1=slopes[n + 1],
                c0=seconds[n],
                c1=seconds[n + 1],
            ),
        )
        for n in range(len(anchors) - 1)
    )


def _spike_objective(spikes: Sequence[SpikeSegment], samples: int) -> float:
    """max |κ − 1| over the spikes, or a penalty above 10 when some Θ' ≥ 0."""
    worst = 0.0
    for spike in spikes:
        curve = spike.curve
        rho = np.linspace(curve.t0, curve.t1, samples)
        secant = abs(curve.v1 - curve.v0) / curve.width
        rise = float(np.max(curve(rho, 1))) / secant
        if rise >= 0.0:
            return 10.0 + rise
        worst = max(worst, float(np.max(np.abs(spike_curvature(curve, rho) - 1.0))))
    return worst


def _coordinate_descent(objective: Callable[[List[float]], float], x0: List[float], target: float, label: str):
    """Derivative-free descent over the shaping parameters; stops once objective <= target."""
    x = list(x0)
    best = objective(x)
    step = 0.5
    iterations = 0
    while iterations < settings.SHAPING_MAX_ITER and best > target and step > 1e-6:
        iterations += 1
        improved = False
        for i in range(len(x)):
            for sign in (1.0, -1.0):
                trial = list(x)
                trial[i] += sign * step
                value = objective(trial)
                if value < best:
                    x, best, improved = trial, value, True
                    break
        if not improved:
            step *= 0.5
    logger.info("%s shaping search: %d iterations, objective %.6g", label, iterations, best)
    return x, best


def _shape_spikes(params: ConstructionParams, thetas, anchors, slopes, seconds):
    free = list(range(1, len(thetas)))
    gaps = [anchors[k + 1] - anchors[k] for k in range(len(anchors) - 1)]
    second_scale = {}
    for k in free:
        adjacent = [gaps[j] for j in (k - 1, k) if 0 <= j < len(gaps)]
        second_scale[k] = abs(slopes[k]) / min(adjacent)

    def knots(x: List[float]):
        s, c = list(slopes), list(seconds)
        for i, k in enumerate(free):
            s[k] = slopes[k] * math.exp(x[2 * i])
            c[k] = seconds[k] + x[2 * i + 1] * second_scale[k]
        return s, c

    def objective(x: List[float]) -> float:
        return _spike_objective(_assemble_spikes(thetas, anchors, *knots(x)), params.samples_per_segment)

    x, _ = _coordinate_descent(objective, [0.0] * (2 * len(free)), params.epsilon, "H2")
    return _assemble_spikes(thetas, anchors, *knots(x))


def build_h2_leaf(params: ConstructionParams, oracle: GrowthOracle) -> LeafCurve:
    """
    Build the H² leaf through i for the given oracle.

    Anchor 0 sits on the horocycle at θ = δ; the remaining anchors are the
    oracle values shifted by the same constant. Raises ConstructionError when
    the pinch cannot be met after the shaping search.
    """
    anchors = _h2_anchors(params, oracle)
    thetas = [params.delta / 2**n for n in range(params.n_max + 1)]

    spikes: Tuple[SpikeSegment, ...] = ()
    if params.n_max > 0:
        secants = [(thetas[k + 1] - thetas[k]) / (anchors[k + 1] - anchors[k]) for k in range(params.n_max)]
        tan = math.tan(params.delta)
        slopes, seconds = _initial_knots(secants, -tan, tan / math.cos(params.delta) ** 2)
        spikes = _assemble_spikes(thetas, anchors, slopes, seconds)
        if _spike_objective(spikes, params.samples_per_segment) > params.epsilon:
            spikes = _shape_spikes(params, thetas, anchors, slopes, seconds)

    leaf = LeafCurve(params=params, oracle=oracle.describe(), anchors=anchors, spikes=spikes)

    extrema = scan_extrema(h2_curvature_pieces(leaf), params.samples_per_segment)
    low, high = 1.0 - params.epsilon, 1.0 + params.epsilon
    if extrema.kappa_min < low or extrema.kappa_max > high:
        if extrema.kappa_min < low and (low - extrema.kappa_min) >= (extrema.kappa_max - high):
            segment, worst = extrema.segment_min, extrema.kappa_min
        else:
            segment, worst = extrema.segment_max, extrema.kappa_max
        raise ConstructionError(
            f"curvature pinch [{low:g}, {high:g}] infeasible on {segment}: worst kappa {worst:.6g}",
            segment=segment,
            worst_kappa=worst,
        )
    for spike in spikes:
        rho = np.linspace(spike.curve.t0, spike.curve.t1, params.samples_per_segment)
        rise = float(np.max(spike.curve(rho, 1)))
        if rise >= 0.0:
            kappa = np.asarray(spike_curvature(spike.curve, rho), dtype=float)
            worst = float(kappa[int(np.argmax(np.abs(kappa - 1.0)))])
            raise ConstructionError(
                f"{spike.label} is not monotone in theta: max dtheta/drho {rise:.6g}, worst kappa {worst:.6g}",
                segment=spike.label,
                worst_kappa=worst,
            )

    logger.info(
        "built H2 leaf: %d spikes, kappa in [%.6f, %.6f], anchors %s",
        len(spikes),
        extrema.kappa_min,
        extrema.kappa_max,
        ", ".join(f"{a:.6g}" for a in anchors),
    )
    return leaf


def leaf_frame(leaf: LeafCurve, theta: float) -> Tuple[HPoint, UnitVector, float]:
    """Half-plane point, positive unit normal and curvature of the leaf at θ."""
    folded, mirrored = _fold(leaf, theta)
    if folded >= leaf.params.delta:
        rho = -math.log(math.sin(folded))
        w = 1.0 / math.sin(folded)
        n_theta, n_rho = (math.cos(folded) / math.sin(folded)) / w, 1.0 / w
        kappa = float(core_curvature(folded))
    else:
        spike = leaf.spike_for(folded)
        rho = spike.rho_at(folded)
        d1 = float(spike.curve(rho, 1))
        w = math.sqrt(1.0 + d1 * d1)
        n_theta, n_rho = 1.0 / w, -d1 / w
        kappa = float(spike_curvature(spike.curve, rho))

    cos, sin = math.cos(folded), math.sin(folded)
    nx = cos * n_rho - sin * n_theta
    ny = sin * n_rho + cos * n_theta
    point = polar_to_hpoint(PolarPoint(folded, rho + leaf.log_scale))
    if mirrored:
        point = HPoint(-point.x, point.log_y, point.saturated)
        nx = -nx
    return point, UnitVector.normalized(nx, ny), kappa


def _half_arc_length(leaf: LeafCurve, a: float, b: float) -> LogScalar:
    """Length of the right half between θ = a and θ = b, a ≤ b ≤ π/2."""
    delta = leaf.params.delta
    total = LogScalar.zero()
    core_lo = max(a, delta)
    if b > core_lo:
        # ∫ dθ / sin²θ along the horocycle
        total = total + LogScalar.from_value(1.0 / math.tan(core_lo) - 1.0 / math.tan(b))
    if a < delta:
        for spike in leaf.spikes:
            lo, hi = max(a, spike.theta_lo), min(b, spike.theta_hi)
            if lo >= hi:
                continue
            curve = spike.curve
            r_lo, r_hi = spike.rho_at(hi), spike.rho_at(lo)

            def integrand(r: float, curve=curve) -> float:
                d1 = float(curve(r, 1))
                return math.sqrt(1.0 + d1 * d1) / math.sin(float(curve(r)))

            length = adaptive_quad(integrand, r_lo, r_hi, f"arc length on {spike.label}")
            total = total + LogScalar.from_value(length)
    return total


def leaf_arc_length(leaf: LeafCurve, theta1: float, theta2: float) -> LogScalar:
    """Hyperbolic length of the leaf between two polar angles."""
    if theta1 > theta2:
        raise DomainError(f"arc length needs theta1 <= theta2, got {theta1!r} > {theta2!r}")
    _fold(leaf, theta1)
    _fold(leaf, theta2)
    if theta1 == theta2:
        return LogScalar.zero()
    if theta2 <= HALF_PI:
        return _half_arc_length(leaf, theta1, theta2)
    if theta1 >= HALF_PI:
        return _half_arc_length(leaf, math.pi - theta2, math.pi - theta1)
    return _half_arc_length(leaf, theta1, HALF_PI) + _half_arc_length(leaf, math.pi - theta2, HALF_PI)


def symmetric_arc_length(leaf: LeafCurve, theta: float) -> LogScalar:
    """Leaf length between the mirror points at θ and π − θ."""
    _fold(leaf, theta)
    if theta > HALF_PI:
        raise DomainError("symmetric arc length takes the right-half angle")
    half = _half_arc_length(leaf, theta, HALF_PI)
    if half.is_zero:
        return half
    return half * LogScalar.from_value(2.0)


def junction_defects(leaf: Union[LeafCurve, "E2LeafCurve"]) -> List[Tuple[str, float, float]]:
    """
    Relative mismatch of one-sided first and second derivatives at every junction.

    Returns (label, first-derivative defect, second-derivative defect).
    """
    if isinstance(leaf, E2LeafCurve):
        return _e2_junction_defects(leaf)
    defects = []
    if not leaf.spikes:
        return defects
    delta = leaf.params.delta
    first = leaf.spikes[0].curve
    sin = math.sin(delta)
    core = (-math.cos(delta) / sin, 1.0 / (sin * sin))
    d1, d2 = float(first(first.t0, 1)), float(first(first.t0, 2))
    spike = (1.0 / d1, -d2 / d1**3)
    defects.append(("core|spike[0]", _rel(core[0], spike[0]), _rel(core[1], spike[1])))
    for left, right in zip(leaf.spikes, leaf.spikes[1:]):
        a, b = left.curve, right.curve
        defects.append(
            (
                f"{left.label}|{right.label}",
                _rel(float(a(a.t1, 1)), float(b(b.t0, 1))),
                _rel(float(a(a.t1, 2)), float(b(b.t0, 2))),
            )
        )
    return defects


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def leaf_polyline(leaf: LeafCurve, samples: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Sample the whole leaf in the chart (θ, asinh ρ), ordered by θ.

    Spikes are sampled uniformly in asinh ρ so the chart spacing stays even;
    junction points appear once.
    """
    thetas: List[np.ndarray] = []
    rhos: List[np.ndarray] = []
    for spike in reversed(leaf.spikes):
        curve = spike.curve
        u = np.linspace(math.asinh(curve.t1), math.asinh(curve.t0), samples)
        rho = np.sinh(u)
        rho[0], rho[-1] = curve.t1, curve.t0
        theta = curve(rho)
        theta[0], theta[-1] = curve.v1, curve.v0
        thetas.append(theta[:-1])
        rhos.append(rho[:-1])
    core = np.linspace(leaf.params.delta, HALF_PI, samples)
    thetas.append(core)
    rhos.append(-np.log(np.sin(core)))
    if leaf.spikes:
        rhos[-1][0] = leaf.anchors[0]

    right_theta = np.concatenate(thetas)
    right_rho = np.concatenate(rhos)
    theta = np.concatenate([right_theta, math.pi - right_theta[-2::-1]])
    rho = np.concatenate([right_rho, right_rho[-2::-1]]) + leaf.log_scale
    return theta, np.column_stack([theta, np.arcsinh(rho)])


# ============================================================================
# E² leaf
# ============================================================================

@dataclass(frozen=True)
class E2LeafCurve:
    """
    The E² leaf y = φ(x), even in x.

    φ = δx² on |x| ≤ K; the turn x = g(y) climbs over [δK², y_T] to
    x = K + L; tail piece n is x = g(η), η = ln y, between anchors n and n+1
    placed at x = K + L + n. anchors hold ln φ there. offset is the vertical
    translation of the leaf within its family.
    """

    params: ConstructionParams
    oracle: str
    lead_in: int
    turn: HermiteQuintic
    tail: Tuple[HermiteQuintic, ...]
    anchors: Tuple[float, ...]
    offset: float = 0.0
    even: bool = True

    @property
    def x_turn(self) -> float:
        return self.params.K + self.lead_in

    @property
    def x_max(self) -> float:
        return self.anchor_x(len(self.anchors) - 1)

    def anchor_x(self, n: int) -> float:
        return self.params.K + self.lead_in + n

    @property
    def segment_count(self) -> int:
        return 2 + len(self.tail)


def lead_in_length(params: ConstructionParams) -> int:
    """Integer lead-in length letting the slope 2δK turn vertical with curvature ≤ ε."""
    cot = 1.0 / (2.0 * params.delta * params.K)
    return max(1, math.ceil(cot * cot / (2.0 * settings.LEAD_IN_BUDGET * params.epsilon)))


def _turn_curve(params: ConstructionParams, lead_in: int, height: float, tail_slope: float) -> HermiteQuintic:
    a = 1.0 / (2.0 * params.delta * params.K)
    y_k = params.delta * params.K**2
    y_t = y_k + height
    return HermiteQuintic(
        t0=y_k,
        t1=y_t,
        v0=params.K,
        v1=params.K + lead_in,
        d0=a,
        d1=tail_slope / y_t,
        c0=-2.0 * params.delta * a**3,
        c1=-tail_slope / (y_t * y_t),
    )


def turn_curvature(turn: HermiteQuintic, y):
    d1 = turn(y, 1)
    return -turn(y, 2) / (1.0 + d1 * d1) ** 1.5


def tail_curvature(piece: HermiteQuintic, eta):
    eta = np.asarray(eta, dtype=float)
    decay = np.exp(-eta)
    g1 = piece(eta, 1)
    x_y = g1 * decay
    x_yy = (piece(eta, 2) - g1) * decay * decay
    return -x_yy / (1.0 + x_y * x_y) ** 1.5


def parabola_curvature(delta: float, x):
    x = np.asarray(x, dtype=float)
    return 2.0 * delta / (1.0 + 4.0 * delta * delta * x * x) ** 1.5


def _tail_pieces(etas: Sequence[float], slopes: Sequence[float], x0: float) -> Tuple[HermiteQuintic, ...]:
    return tuple(
        HermiteQuintic(
            t0=etas[n], t1=etas[n + 1], v0=x0 + n, v1=x0 + n + 1, d0=slopes[n], d1=slopes[n + 1], c0=0.0, c1=0.0
        )
        for n in range(len(etas) - 1)
    )


def _e2_objective(turn: HermiteQuintic, tail: Sequence[HermiteQuintic], samples: int) -> float:
    y = np.linspace(turn.t0, turn.t1, samples)
    mean_slope = (turn.v1 - turn.v0) / turn.width
    low = float(np.min(turn(y, 1))) / mean_slope
    if low <= 0.0:
        return 10.0 - low
    worst = float(np.max(np.abs(turn_curvature(turn, y))))
    for piece in tail:
        eta = np.linspace(piece.t0, piece.t1, samples)
        low = float(np.min(piece(eta, 1))) * piece.width
        if low <= 0.0:
            return 10.0 - low
        worst = max(worst, float(np.max(np.abs(tail_curvature(piece, eta)))))
    return worst


def build_e2_leaf(params: ConstructionParams, oracle: GrowthOracle) -> E2LeafCurve:
    """
    Build the E² leaf for the given oracle.

    Requires 2δ ≤ ε. Anchor n sits at x = K + L + n with ln φ equal to the
    oracle value shifted so that anchor 0 is the top of the turn.
    """
    if 2.0 * params.delta > params.epsilon:
        raise ConfigError("e2 construction requires 2*delta <= epsilon")
    ln_r = []
    for n in range(params.n_max + 1):
        value = log_radius(oracle, n)
        if value.saturated:
            raise ConstructionError(
                f"oracle {oracle.describe()} saturates at n={n}; lower n_max", segment=f"anchor[{n}]"
            )
        ln_r.append(value.value)

    lead_in = lead_in_length(params)
    a = 1.0 / (2.0 * params.delta * params.K)
    y_k = params.delta * params.K**2
    gaps = [ln_r[n + 1] - ln_r[n] for n in range(params.n_max)]
    if gaps:
        slopes, _ = _initial_knots([1.0 / g for g in gaps], 1.0 / gaps[0], 0.0)
    else:
        # no tail: the turn ends with the slope of a unit log step
        slopes = [1.0]

    # The turn height balances the mean slope between the two end slopes.
    height = 2.0 * lead_in / a
    for _ in range(50):
        height = 2.0 * lead_in / (a + slopes[0] / (y_k + height))

    x0 = params.K + lead_in
    samples = params.samples_per_segment

    def assemble(log_stretch: float):
        h = height * math.exp(log_stretch)
        turn = _turn_curve(params, lead_in, h, slopes[0])
        eta0 = math.log(turn.t1)
        etas = [eta0] + [eta0 + (v - ln_r[0]) for v in ln_r[1:]]
        return turn, _tail_pieces(etas, slopes, x0), tuple(etas)

    def objective(x: List[float]) -> float:
        turn, tail, _ = assemble(x[0])
        return _e2_objective(turn, tail, samples)

    log_stretch = 0.0
    if objective([0.0]) > params.epsilon:
        (log_stretch,), _ = _coordinate_descent(objective, [0.0], params.epsilon, "E2")
    turn, tail, etas = assemble(log_stretch)
    leaf = E2LeafCurve(params=params, oracle=oracle.describe(), lead_in=lead_in, turn=turn, tail=tail, anchors=etas)

    extrema = scan_extrema(e2_curvature_pieces(leaf), samples)
    worst_abs = max(abs(extrema.kappa_min), abs(extrema.kappa_max))
    if worst_abs > params.epsilon + settings.IDENTITY_TOL or _e2_objective(turn, tail, samples) >= 10.0:
        segment = extrema.segment_max if abs(extrema.kappa_max) >= abs(extrema.kappa_min) else extrema.segment_min
        raise ConstructionError(
            f"curvature bound {params.epsilon:g} infeasible on {segment}: worst |kappa| {worst_abs:.6g}",
            segment=segment,
            worst_kappa=worst_abs,
        )
    logger.info(
        "built E2 leaf: lead-in %d, %d tail pieces, max |kappa| %.6f",
        lead_in,
        len(tail),
        worst_abs,
    )
    return leaf


def e2_log_height(leaf: E2LeafCurve, x: float) -> float:
    """ln φ(x) of the untranslated leaf."""
    ax = abs(x)
    if ax > leaf.x_max:
        raise DomainError(f"x={x!r} outside the constructed domain |x| <= {leaf.x_max!r}")
    params = leaf.params
    if ax <= params.K:
        if ax == 0.0:
            return -math.inf
        return math.log(params.delta) + 2.0 * math.log(ax)
    for n in range(len(leaf.anchors)):
        if ax == leaf.anchor_x(n):
            return leaf.anchors[n]
    if ax < leaf.x_turn:
        return math.log(leaf.turn.invert(ax))
    n = min(int(math.floor(ax - leaf.x_turn)), len(leaf.tail) - 1)
    return leaf.tail[n].invert(ax)


def e2_height(leaf: E2LeafCurve, x: float) -> float:
    """φ(x) + offset, the height of the leaf over x."""
    log_height = e2_log_height(leaf, x)
    if log_height > settings.SATURATION_LOG:
        raise SaturationError(f"leaf height at x={x!r} exceeds the representable range")
    return math.exp(log_height) + leaf.offset


def e2_arc_length(leaf: E2LeafCurve, x: float) -> LogScalar:
    """Euclidean length of the leaf from the vertex to abscissa |x|."""
    ax = abs(x)
    if ax > leaf.x_max:
        raise DomainError(f"x={x!r} outside the constructed domain |x| <= {leaf.x_max!r}")
    if ax == 0.0:
        return LogScalar.zero()
    delta, K = leaf.params.delta, leaf.params.K

    u = 2.0 * delta * min(ax, K)
    total = LogScalar.from_value((u * math.sqrt(1.0 + u * u) + math.asinh(u)) / (4.0 * delta))
    if ax <= K:
        return total

    turn = leaf.turn
    y_end = turn.t1 if ax >= leaf.x_turn else turn.invert(ax)
    length = adaptive_quad(
        lambda y: math.sqrt(1.0 + float(turn(y, 1)) ** 2), turn.t0, y_end, "arc length on turn"
    )
    total = total + LogScalar.from_value(length)
    if ax <= leaf.x_turn:
        return total

    for n, piece in enumerate(leaf.tail):
        if ax <= leaf.anchor_x(n):
            break
        eta_end = piece.t1 if ax >= leaf.anchor_x(n + 1) else piece.invert(ax)
        total = total + _tail_length(piece, piece.t0, eta_end, f"arc length on tail[{n}]")
    return total


def _tail_length(piece: HermiteQuintic, eta_a: float, eta_b: float, label: str) -> LogScalar:
    """∫ √(e^{2η} + g_η²) dη, accumulated relative to e^{η_b}."""

    def integrand(eta: float) -> float:
        return math.hypot(math.exp(eta - eta_b), float(piece(eta, 1)) * math.exp(-eta_b))

    # the integrand is concentrated in the last few units below eta_b
    split = max(eta_a, eta_b - 50.0)
    scaled = adaptive_quad(integrand, split, eta_b, label)
    if split > eta_a:
        scaled += adaptive_quad(integrand, eta_a, split, label)
    return LogScalar.from_log(eta_b + math.log(scaled))


def e2_polyline(leaf: E2LeafCurve, samples: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Sample the whole E² leaf in the chart (x, asinh y), ordered by x.

    Each piece is sampled in its own parameter (x, y or η); junction points
    appear once.
    """
    delta = leaf.params.delta
    xs: List[np.ndarray] = [np.linspace(0.0, leaf.params.K, samples)[:-1]]
    heights: List[np.ndarray] = [np.arcsinh(delta * xs[0] ** 2)]
    turn = leaf.turn
    y = np.linspace(turn.t0, turn.t1, samples)[:-1]
    x = turn(y)
    x[0] = turn.v0
    xs.append(x)
    heights.append(np.arcsinh(y))
    for piece in leaf.tail:
        eta = np.linspace(piece.t0, piece.t1, samples)[:-1]
        x = piece(eta)
        x[0] = piece.v0
        xs.append(x)
        heights.append(np.where(eta > 20.0, eta + math.log(2.0), np.arcsinh(np.exp(np.minimum(eta, 20.0)))))
    last = leaf.anchors[-1] if leaf.tail else math.log(turn.t1)
    xs.append(np.array([leaf.x_max]))
    heights.append(np.array([last + math.log(2.0) if last > 20.0 else math.asinh(math.exp(last))]))

    right_x = np.concatenate(xs)
    right_h = np.concatenate(heights)
    x = np.concatenate([-right_x[:0:-1], right_x])
    h = np.concatenate([right_h[:0:-1], right_h])
    return x, np.column_stack([x, h])


def _e2_junction_defects(leaf: E2LeafCurve) -> List[Tuple[str, float, float]]:
    params = leaf.params
    turn = leaf.turn
    slope_k = 2.0 * params.delta * params.K
    g1, g2 = float(turn(turn.t0, 1)), float(turn(turn.t0, 2))
    defects = [
        ("parabola|turn", _rel(slope_k, 1.0 / g1), _rel(2.0 * params.delta, -g2 / g1**3)),
    ]
    if leaf.tail:
        first = leaf.tail[0]
        y_t = turn.t1
        t1, t2 = float(turn(y_t, 1)), float(turn(y_t, 2))
        e1, e2 = float(first(first.t0, 1)), float(first(first.t0, 2))
        defects.append(("turn|tail[0]", _rel(t1, e1 / y_t), _rel(t2, (e2 - e1) / (y_t * y_t))))
        for n, (left, right) in enumerate(zip(leaf.tail, leaf.tail[1:])):
            defects.append(
                (
                    f"tail[{n}]|tail[{n + 1}]",
                    _rel(float(left(left.t1, 1)), float(right(right.t0, 1))),
                    _rel(float(left(left.t1, 2)), float(right(right.t0, 2))),
                )
            )
    return defects


# ============================================================================
# Curvature sampling shared by the builders and the analysis service
# ============================================================================

@dataclass(frozen=True)
class CurvaturePiece:
    """A leaf piece with its own parameter, curvature function and map to the reported coordinate."""

    label: str
    lo: float
    hi: float
    kappa: Callable[[np.ndarray], np.ndarray]
    position: Callable[[float], float]


@dataclass(frozen=True)
class CurvatureExtrema:
    kappa_min: float
    kappa_max: float
    argmin: float
    argmax: float
    segment_min: str
    segment_max: str


def h2_curvature_pieces(leaf: LeafCurve) -> List[CurvaturePiece]:
    pieces = [CurvaturePiece("core", leaf.params.delta, HALF_PI, core_curvature, float)]
    for spike in leaf.spikes:
        curve = spike.curve
        pieces.append(
            CurvaturePiece(
                spike.label,
                curve.t0,
                curve.t1,
                lambda rho, curve=curve: spike_curvature(curve, rho),
                lambda rho, curve=curve: float(curve(rho)),
            )
        )
    return pieces


def e2_curvature_pieces(leaf: E2LeafCurve) -> List[CurvaturePiece]:
    delta = leaf.params.delta
    turn = leaf.turn
    pieces = [
        CurvaturePiece("parabola", 0.0, leaf.params.K, lambda x: parabola_curvature(delta, x), float),
        CurvaturePiece(
            "turn", turn.t0, turn.t1, lambda y: turn_curvature(turn, y), lambda y: float(turn(y))
        ),
    ]
    for n, piece in enumerate(leaf.tail):
        pieces.append(
            CurvaturePiece(
                f"tail[{n}]",
                piece.t0,
                piece.t1,
                lambda eta, piece=piece: tail_curvature(piece, eta),
                lambda eta, piece=piece: float(piece(eta)),
            )
        )
    return pieces


def _refine(kappa: Callable, grid: np.ndarray, index: int, sign: float, rounds: int) -> Tuple[float, float]:
    """Local bisection around a grid extremum of sign·κ (sign −1 for a minimum)."""
    lo = float(grid[max(index - 1, 0)])
    hi = float(grid[min(index + 1, len(grid) - 1)])
    best = float(grid[index])
    best_value = float(kappa(np.array([best]))[0])
    for _ in range(rounds):
        left, right = 0.5 * (lo + best), 0.5 * (best + hi)
        values = kappa(np.array([left, right]))
        left_value, right_value = float(values[0]), float(values[1])
        if sign * left_value > sign * best_value and sign * left_value >= sign * right_value:
            hi, best, best_value = best, left, left_value
        elif sign * right_value > sign * best_value:
            lo, best, best_value = best, right, right_value
        else:
            lo, hi = left, right
    return best, best_value


def scan_extrema(pieces: Sequence[CurvaturePiece], samples: int, rounds: int = settings.REFINE_ROUNDS) -> CurvatureExtrema:
    """Grid extrema of κ over all pieces, refined by local bisection."""
    low = (math.inf, 0.0, "")
    high = (-math.inf, 0.0, "")
    for piece in pieces:
        grid = np.linspace(piece.lo, piece.hi, samples)
        values = np.asarray(piece.kappa(grid), dtype=float)
        bad = ~np.isfinite(values)
        if bad.any():
            raise ConstructionError(
                f"curvature evaluation failed on {piece.label} at parameter {float(grid[np.argmax(bad)])!r}",
                segment=piece.label,
            )
        p, v = _refine(piece.kappa, grid, int(np.argmin(values)), -1.0, rounds)
        if v < low[0]:
            low = (v, piece.position(p), piece.label)
        p, v = _refine(piece.kappa, grid, int(np.argmax(values)), 1.0, rounds)
        if v > high[0]:
            high = (v, piece.position(p), piece.label)
    return CurvatureExtrema(low[0], high[0], low[1], high[1], low[2], high[2])


# ============================================================================
# Families
# ============================================================================

class Parametrization(str, Enum):
    H2_DILATION = "h2_dilation"
    E2_TRANSLATION = "e2_translation"


@dataclass(frozen=True)
class FoliationFamily:
    base_leaf: Union[LeafCurve, E2LeafCurve]
    parametrization: Parametrization

    @classmethod
    def of(cls, leaf: Union[LeafCurve, E2LeafCurve]) -> "FoliationFamily":
        if isinstance(leaf, E2LeafCurve):
            return cls(leaf, Parametrization.E2_TRANSLATION)
        return cls(leaf, Parametrization.H2_DILATION)


def leaf_at(family: FoliationFamily, parameter: float) -> Union[LeafCurve, E2LeafCurve]:
    """The leaf of the family at log_t (H²) or vertical offset c (E²)."""
    base = family.base_leaf
    if parameter == 0.0:
        return base
    if family.parametrization == Parametrization.H2_DILATION:
        return replace(base, log_scale=base.log_scale + parameter)
    return replace(base, offset=base.offset + parameter)


def leaf_through_point(family: FoliationFamily, p: Union[HPoint, PolarPoint, EPoint]) -> float:
    """The family parameter of the unique leaf through p."""
    base = family.base_leaf
    if family.parametrization == Parametrization.H2_DILATION:
        if isinstance(p, HPoint):
            if p.saturated:
                raise DomainError("point beyond the representable range")
            p = hpoint_to_polar(p)
        if not isinstance(p, PolarPoint):
            raise DomainError("an H2 family takes HPoint or PolarPoint")
        return p.log_r - eval_leaf(base, p.theta)

    if not isinstance(p, EPoint):
        raise DomainError("an E2 family takes EPoint")
    y = p.y.value if isinstance(p.y, LogScalar) else p.y
    return y - e2_height(base, p.x)


def leaves_disjoint(family: FoliationFamily, t1: float, t2: float, positions: Sequence[float]) -> bool:
    """True when the two leaves differ at every sampled position."""
    first, second = leaf_at(family, t1), leaf_at(family, t2)
    for position in positions:
        if family.parametrization == Parametrization.H2_DILATION:
            if eval_leaf(first, position) == eval_leaf(second, position):
                return False
        elif e2_height(first, position) == e2_height(second, position):
            return False
    return True

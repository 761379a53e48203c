"""Tests for the Euclidean kernel."""
import math

import pytest

from foliation.egeom import EPoint, adaptive_quad, euc_curvature_graph, euc_distance, graph_arc_length
from foliation.errors import CurveError, QuadratureError, SaturationError
from foliation.hgeom import LogScalar


def test_parabola_curvature_at_vertex():
    assert euc_curvature_graph(lambda x: 0.05 * x * x, 0.0) == pytest.approx(0.1, rel=1e-6)


def test_curvature_with_analytic_derivatives():
    value = euc_curvature_graph(lambda x: x**3, 1.0, dphi=lambda x: 3 * x * x, d2phi=lambda x: 6 * x)
    assert value == pytest.approx(6.0 / 10.0**1.5, rel=1e-12)


def test_kink_is_rejected():
    with pytest.raises(CurveError):
        euc_curvature_graph(abs, 5e-5)


def test_distance_plain():
    assert euc_distance(EPoint(0.0, 0.0), EPoint(3.0, 4.0)) == pytest.approx(5.0)


def test_distance_log_carried_heights():
    height = LogScalar.from_log(50.0)
    assert euc_distance(EPoint(-2.0, height), EPoint(2.0, height)) == pytest.approx(4.0, rel=1e-12)


def test_distance_saturates():
    far = LogScalar.from_log(800.0)
    with pytest.raises(SaturationError):
        euc_distance(EPoint(0.0, far), EPoint(1.0, LogScalar.from_value(1.0)))


def test_arc_length_of_line():
    assert graph_arc_length(lambda x: 2.0 * x, 0.0, 1.0) == pytest.approx(math.sqrt(5.0), rel=1e-9)


def test_arc_length_of_parabola():
    delta, K = 0.05, 10.0
    u = 2.0 * delta * K
    expected = (u * math.sqrt(1.0 + u * u) + math.asinh(u)) / (4.0 * delta)
    length = graph_arc_length(lambda x: delta * x * x, 0.0, K, dphi=lambda x: 2.0 * delta * x)
    assert length == pytest.approx(expected, rel=1e-9)


def test_arc_length_of_steep_exponential():
    # vertical form: rise plus a bounded excess
    length = graph_arc_length(lambda x: math.exp(20.0 * x), 0.0, 1.0, dphi=lambda x: 20.0 * math.exp(20.0 * x))
    rise = math.exp(20.0) - 1.0
    assert rise <= length <= rise + 1.0


def test_arc_length_empty_interval():
    assert graph_arc_length(math.sin, 1.0, 1.0) == 0.0


def test_divergent_integral_is_rejected():
    with pytest.raises(QuadratureError, match="pole"):
        adaptive_quad(lambda x: 1.0 / x, 0.0, 1.0, "pole")

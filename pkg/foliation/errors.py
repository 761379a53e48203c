"""
Error types for the foliation toolkit.
Every error carries the exit status the command line reports for it.
"""
from typing import Optional


class FoliationError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 4


class ConfigError(FoliationError):
    """Invalid run configuration or construction parameters."""

    exit_code = 2


class DomainError(FoliationError):
    """Argument outside the domain of an operation."""


class SaturationError(FoliationError):
    """A magnitude exceeded the representable log range."""


class OracleError(FoliationError):
    """Growth oracle misconfigured, out of range, or over its step cap."""

    exit_code = 2


class ConstructionError(FoliationError):
    """The curvature pinch could not be met for a segment."""

    exit_code = 3

    def __init__(self, message: str, segment: Optional[str] = None, worst_kappa: Optional[float] = None):
        super().__init__(message)
        self.segment = segment
        self.worst_kappa = worst_kappa


class QuadratureError(FoliationError):
    """Adaptive quadrature did not converge."""


class CurveError(FoliationError):
    """Degenerate or non-differentiable curve sample."""


class AnalysisError(FoliationError):
    """A measurement could not be carried out."""


class SamplingError(AnalysisError):
    """Sample grid too coarse for the requested analysis."""


class LeafFormatError(FoliationError):
    """A leaf file could not be parsed."""

    exit_code = 2

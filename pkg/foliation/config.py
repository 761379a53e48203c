"""
Configuration module for the foliation toolkit.
Numeric defaults live on Settings; runs are described by flat key=value files.
"""
import math
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from .errors import ConfigError


class Settings:
    """Numeric defaults and tolerances shared by every module."""

    # Log-domain numerics
    SATURATION_LOG: float = 7.0e2

    # Tolerances
    IDENTITY_TOL: float = 1e-12
    DISTANCE_TOL: float = 1e-9
    CURVATURE_TOL: float = 1e-6
    VERTICAL_NORMAL_TOL: float = 1e-9
    UNIT_VECTOR_TOL: float = 1e-12
    ANGLE_TOL: float = 1e-9
    EXP_BOUND_SLACK: float = 1e-6
    CROSSING_RESIDUAL_TOL: float = 1e-8

    # Differentiation and quadrature
    FD_STEP: float = 1e-4
    QUAD_ABS_TOL: float = 1e-9
    QUAD_REL_TOL: float = 1e-12
    QUAD_LIMIT: int = 200

    # Construction defaults
    DEFAULT_DELTA: float = 0.1
    DEFAULT_EPSILON: float = 0.1
    DEFAULT_K: float = 10.0
    DEFAULT_N_MAX: int = 2
    DEFAULT_SAMPLES: int = 4096
    SHAPING_MAX_ITER: int = 200
    LEAD_IN_BUDGET: float = 0.6
    REFINE_ROUNDS: int = 3

    # Growth oracles
    ACKERMANN_STEP_CAP: int = 10_000_000

    # Output
    EMIT_CHOICES = ("csv", "svg", "leaf")
    CSV_COLUMNS = ["n", "theta", "d_ambient", "log_d_leaf", "saturated"]
    SVG_SIZE_IN: Tuple[float, float] = (8.0, 6.0)
    SVG_DPI: int = 100
    SVG_HASH_SALT: str = "foliation-distortion"
    LEAF_FILE: str = "leaf.txt"
    REPORT_FILE: str = "build_report.json"
    CSV_FILE: str = "distortion.csv"
    SVG_FILE: str = "distortion.svg"


settings = Settings()


class RunConfig(BaseModel):
    """One build run. Keys carry their units; unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    construction: Literal["h2", "e2"] = "h2"
    delta_rad: float = settings.DEFAULT_DELTA
    epsilon: float = settings.DEFAULT_EPSILON
    K: float = settings.DEFAULT_K
    n_max: int = settings.DEFAULT_N_MAX
    samples_per_segment: int = settings.DEFAULT_SAMPLES
    oracle: str = "tower"
    output_dir: Path = Path("out")
    emit: Tuple[str, ...] = settings.EMIT_CHOICES

    @field_validator("delta_rad")
    @classmethod
    def _check_delta(cls, v: float) -> float:
        if not (0.0 < v < math.pi / 4):
            raise ValueError("delta_rad must satisfy 0 < delta < pi/4")
        return v

    @field_validator("epsilon")
    @classmethod
    def _check_epsilon(cls, v: float) -> float:
        if not (0.0 < v < 1.0):
            raise ValueError("epsilon must satisfy 0 < epsilon < 1")
        return v

    @field_validator("K")
    @classmethod
    def _check_k(cls, v: float) -> float:
        if not v > 0.0:
            raise ValueError("K must be positive")
        return v

    @field_validator("n_max")
    @classmethod
    def _check_n_max(cls, v: int) -> int:
        if v < 0:
            raise ValueError("n_max must be nonnegative")
        return v

    @field_validator("samples_per_segment")
    @classmethod
    def _check_samples(cls, v: int) -> int:
        if v < 8:
            raise ValueError("samples_per_segment must be at least 8")
        return v

    @field_validator("emit", mode="before")
    @classmethod
    def _split_emit(cls, v: Any) -> Tuple[str, ...]:
        if isinstance(v, str):
            v = [part.strip() for part in v.split(",") if part.strip()]
        flags = tuple(v)
        unknown = [f for f in flags if f not in settings.EMIT_CHOICES]
        if unknown:
            raise ValueError(f"unknown emit flags: {', '.join(unknown)}")
        return flags

    @model_validator(mode="after")
    def _check_parabola_bound(self) -> "RunConfig":
        if self.construction == "e2" and 2.0 * self.delta_rad > self.epsilon:
            raise ValueError("e2 construction requires 2*delta <= epsilon")
        return self

    def to_params(self):
        """Construction parameters for the leaf builders."""
        from .leaf_service import ConstructionParams

        return ConstructionParams(
            delta=self.delta_rad,
            epsilon=self.epsilon,
            K=self.K,
            n_max=self.n_max,
            samples_per_segment=self.samples_per_segment,
        )


def load_run_config(path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Read a run configuration file and apply command-line overrides.

    The file is parsed with dotenv_values, so nothing leaks into the process
    environment. Overrides set to None are ignored.
    """
    values: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        for key, value in dotenv_values(path).items():
            if value is None:
                raise ConfigError(f"config key without value: {key}")
            values[key] = value
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value

    try:
        return RunConfig(**values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(f"invalid run configuration: {problems}") from e

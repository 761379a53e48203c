"""
Foliation Toolkit - Command Line

Subcommands:
- build: construct an H² or E² leaf from a run configuration
- distortion: tabulate and chart the distortion profile of a leaf file
- check: run a single verdict (curvature, monotone, intersect, expbound)
  against a leaf file or a named test curve
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from .analysis_service import (
    DensePairPlan,
    DistortionProfile,
    SymmetricPairPlan,
    basepoint_monotonicity,
    curvature_scan,
    curve_self_intersection,
    distortion_profile,
    exponential_bound_check,
    growth_separation,
    leaf_self_intersection,
)
from .config import RunConfig, load_run_config, settings
from .curves import NAMED_CURVES, get_curve
from .errors import ConfigError, FoliationError, OracleError
from .export_service import get_exporter
from .growth import get_oracle
from .leaf_io import read_leaf, write_leaf
from .leaf_service import E2LeafCurve, LeafCurve, build_e2_leaf, build_h2_leaf, junction_defects

logger = logging.getLogger("foliation")

CHECKS = ("curvature", "monotone", "intersect", "expbound")


# ========================
# Report Models
# ========================

class JunctionDefect(BaseModel):
    junction: str
    first_derivative: float
    second_derivative: float


class BuildReport(BaseModel):
    """Summary of a successful build."""
    construction: str
    oracle: str
    params: Dict[str, float]
    segment_count: int
    kappa_min: float
    kappa_max: float
    segment_min: str
    segment_max: str
    anchors: List[float]
    lead_in: Optional[int] = None
    junctions: List[JunctionDefect]
    saturation_notes: List[str]
    outputs: List[str]


class CheckVerdict(BaseModel):
    check: str
    target: str
    status: str
    detail: str


# ========================
# Commands
# ========================

def _saturation_notes(leaf) -> List[str]:
    notes = []
    for n, value in enumerate(leaf.anchors):
        if value > settings.SATURATION_LOG:
            where = "half-plane" if isinstance(leaf, LeafCurve) else "plane"
            notes.append(f"anchor {n} (log value {value:.6g}) lies beyond the representable {where}")
    return notes


def cmd_build(config: RunConfig) -> BuildReport:
    """
    Build a leaf and write the requested artifacts.

    Args:
        config: Validated run configuration

    Returns:
        BuildReport, also written as JSON to the output directory
    """
    params = config.to_params()
    oracle = get_oracle(config.oracle)
    if config.construction == "h2":
        leaf = build_h2_leaf(params, oracle)
    else:
        leaf = build_e2_leaf(params, oracle)

    scan = curvature_scan(leaf, params.samples_per_segment)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs = []
    if "leaf" in config.emit:
        outputs.append(str(write_leaf(leaf, out / settings.LEAF_FILE)))
    if "csv" in config.emit or "svg" in config.emit:
        outputs += _write_profile(distortion_profile(leaf), out, config.emit)

    report = BuildReport(
        construction=config.construction,
        oracle=leaf.oracle,
        params={
            "delta": params.delta,
            "epsilon": params.epsilon,
            "K": params.K,
            "n_max": params.n_max,
            "samples_per_segment": params.samples_per_segment,
        },
        segment_count=leaf.segment_count,
        kappa_min=scan.kappa_min,
        kappa_max=scan.kappa_max,
        segment_min=scan.segment_min,
        segment_max=scan.segment_max,
        anchors=list(leaf.anchors),
        lead_in=leaf.lead_in if isinstance(leaf, E2LeafCurve) else None,
        junctions=[JunctionDefect(junction=j, first_derivative=a, second_derivative=b) for j, a, b in junction_defects(leaf)],
        saturation_notes=_saturation_notes(leaf),
        outputs=outputs,
    )
    report_path = out / settings.REPORT_FILE
    report_path.write_text(report.model_dump_json(indent=2) + "\n")
    return report


def _write_profile(profile: DistortionProfile, out: Path, emit: Sequence[str]) -> List[str]:
    exporter = get_exporter()
    written = []
    if "csv" in emit:
        path = out / settings.CSV_FILE
        exporter.to_csv(profile, path)
        written.append(str(path))
    if "svg" in emit:
        path = out / settings.SVG_FILE
        exporter.to_svg(profile, path)
        written.append(str(path))
    return written


def cmd_distortion(leaf_path: Path, out: Path, emit: Sequence[str] = ("csv", "svg"), anchors: Optional[Tuple[int, ...]] = None) -> DistortionProfile:
    """
    Profile a leaf file over its symmetric witness pairs.

    Args:
        leaf_path: Leaf file written by build
        out: Output directory for the CSV and SVG
        emit: Artifacts to write
        anchors: Anchor indices to sample (default: all)

    Returns:
        The distortion profile
    """
    leaf = read_leaf(leaf_path)
    profile = distortion_profile(leaf, SymmetricPairPlan(indices=anchors))
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    _write_profile(profile, out, emit)

    print(f"# {profile.provenance}")
    print(f"# curvature in [{profile.kappa_min:.9g}, {profile.kappa_max:.9g}]; samples are lower bounds for D(t)")
    print(get_exporter().profile_frame(profile).to_string(index=False))

    if isinstance(leaf, LeafCurve):
        try:
            growth = growth_separation(profile, get_oracle(leaf.oracle))
        except OracleError as e:
            logger.warning("growth separation skipped: %s", e)
        else:
            verdict = "holds" if growth.holds else "FAILS"
            print(f"# growth separation {verdict}; first n beating e^t: {growth.first_superexponential}")
    return profile


def _resolve_target(target: str):
    path = Path(target)
    if path.is_file():
        return read_leaf(path)
    if target in NAMED_CURVES:
        return get_curve(target)
    raise ConfigError(
        f"target {target!r} is neither a leaf file nor a named curve ({', '.join(sorted(NAMED_CURVES))})"
    )


def _dense_plan(curve, count: int = 32) -> DensePairPlan:
    s0, s1 = curve.domain
    center = 0.5 * (s0 + s1)
    widths = np.linspace(0.0, 0.499 * (s1 - s0), count + 1)[1:]
    return DensePairPlan(half_widths=tuple(float(w) for w in widths), center=center)


def cmd_check(target: str, check: str, samples: int = settings.DEFAULT_SAMPLES, tolerance: float = 1e-3) -> CheckVerdict:
    """
    Run one check against a leaf file or named curve.

    Args:
        target: Leaf file path or test curve name
        check: One of curvature, monotone, intersect, expbound
        samples: Sample count for the scan
        tolerance: Spacing scale for the intersection sweep

    Returns:
        CheckVerdict with status pass, fail or inapplicable
    """
    if check not in CHECKS:
        raise ConfigError(f"unknown check {check!r}; choose from {', '.join(CHECKS)}")
    subject = _resolve_target(target)
    is_leaf = isinstance(subject, (LeafCurve, E2LeafCurve))

    if check == "curvature":
        scan = curvature_scan(subject, samples)
        status = "pass"
        if isinstance(subject, LeafCurve):
            eps = subject.params.epsilon + settings.CURVATURE_TOL
            if scan.kappa_min < 1.0 - eps or scan.kappa_max > 1.0 + eps:
                status = "fail"
        elif isinstance(subject, E2LeafCurve):
            if scan.max_abs > subject.params.epsilon + settings.CURVATURE_TOL:
                status = "fail"
        detail = scan.model_dump_json()
    elif check == "monotone":
        report = basepoint_monotonicity(subject, samples)
        if report.verdict == "inapplicable":
            status = "inapplicable"
        else:
            status = "pass" if report.verdict == "monotone_anticlockwise" else "fail"
        detail = report.model_dump_json(exclude={"parameters", "angles"})
    elif check == "intersect":
        if is_leaf:
            report = leaf_self_intersection(subject, samples, tolerance)
        else:
            report = curve_self_intersection(subject, samples, tolerance)
        status = "fail" if report.found else "pass"
        detail = report.model_dump_json() if report.found else "none found"
    else:
        profile = distortion_profile(subject) if is_leaf else distortion_profile(subject, _dense_plan(subject))
        report = exponential_bound_check(profile)
        status = report.status
        detail = report.note if status == "inapplicable" else report.model_dump_json()

    return CheckVerdict(check=check, target=target, status=status, detail=detail)


# ========================
# Argument Parsing
# ========================

def _add_run_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=Path, help="run configuration file (key=value)")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--construction", choices=["h2", "e2"])
    parser.add_argument("--oracle", help="tower | ackermann:M | table:PATH")
    parser.add_argument("--n-max", type=int, dest="n_max")
    parser.add_argument("--delta", type=float)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--K", type=float, dest="K")
    parser.add_argument("--samples", type=int)
    parser.add_argument("--emit", help="comma list of csv,svg,leaf")


def _parse_anchors(text: Optional[str]) -> Optional[Tuple[int, ...]]:
    if text is None:
        return None
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as e:
        raise ConfigError(f"bad anchor list {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foliation",
        description="Build foliations with pinched curvature and measure their distortion.",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="construct a leaf")
    _add_run_flags(build)

    distortion = sub.add_parser("distortion", help="distortion profile of a leaf file")
    distortion.add_argument("leaf", type=Path, help="leaf file written by build")
    distortion.add_argument("--out", type=Path, default=Path("out"))
    distortion.add_argument("--emit", default="csv,svg")
    distortion.add_argument("--anchors", help="comma list of anchor indices (default: all)")

    check = sub.add_parser("check", help="run one check")
    check.add_argument("target", help="leaf file or test curve: " + ", ".join(sorted(NAMED_CURVES)))
    check.add_argument("check", choices=CHECKS)
    check.add_argument("--samples", type=int, default=settings.DEFAULT_SAMPLES)
    check.add_argument("--tolerance", type=float, default=1e-3)
    return parser


def _run(args: argparse.Namespace) -> int:
    if args.command == "build":
        overrides = {
            "construction": args.construction,
            "oracle": args.oracle,
            "n_max": args.n_max,
            "delta_rad": args.delta,
            "epsilon": args.epsilon,
            "K": args.K,
            "samples_per_segment": args.samples,
            "emit": args.emit,
            "output_dir": args.out,
        }
        config = load_run_config(args.config, overrides)
        report = cmd_build(config)
        print(report.model_dump_json(indent=2))
        return 0

    if args.command == "distortion":
        emit = tuple(part.strip() for part in args.emit.split(",") if part.strip())
        unknown = [e for e in emit if e not in ("csv", "svg")]
        if unknown:
            raise ConfigError(f"distortion emits csv and svg only, got {', '.join(unknown)}")
        cmd_distortion(args.leaf, args.out, emit, _parse_anchors(args.anchors))
        return 0

    verdict = cmd_check(args.target, args.check, args.samples, args.tolerance)
    print(verdict.detail)
    print(f"VERDICT check={verdict.check} target={verdict.target} status={verdict.status}")
    return 4 if verdict.status == "fail" else 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return _run(args)
    except FoliationError as e:
        extra = ""
        if getattr(e, "segment", None):
            extra = f" [segment={e.segment}, worst_kappa={e.worst_kappa}]"
        print(f"error: {e}{extra}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())

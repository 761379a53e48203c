"""
Leaf text format.

    foliation-leaf 1
    construction h2|e2
    params delta=... epsilon=... K=... n_max=... samples_per_segment=...
    oracle <oracle description>
    scale <log_scale>            (h2)   |   offset <c> / lead_in <L>   (e2)
    anchors <ρ0> <ρ1> ...
    segment <kind> <index> t0 t1 v0 v1 d0 d1 c0 c1

Floats are written with repr, so a leaf reads back bit-identical.
"""
import logging
from pathlib import Path
from typing import Dict, List, Union

from .errors import FoliationError, LeafFormatError
from .leaf_service import ConstructionParams, E2LeafCurve, HermiteQuintic, LeafCurve, SpikeSegment

logger = logging.getLogger(__name__)

HEADER = "foliation-leaf 1"
_QUINTIC_FIELDS = ("t0", "t1", "v0", "v1", "d0", "d1", "c0", "c1")

Leaf = Union[LeafCurve, E2LeafCurve]


def _params_line(params: ConstructionParams) -> str:
    return (
        f"params delta={params.delta!r} epsilon={params.epsilon!r} K={params.K!r} "
        f"n_max={params.n_max} samples_per_segment={params.samples_per_segment}"
    )


def _segment_line(kind: str, index: int, curve: HermiteQuintic) -> str:
    values = " ".join(repr(float(getattr(curve, name))) for name in _QUINTIC_FIELDS)
    return f"segment {kind} {index} {values}"


def dumps(leaf: Leaf) -> str:
    lines = [HEADER]
    if isinstance(leaf, LeafCurve):
        lines += [
            "construction h2",
            _params_line(leaf.params),
            f"oracle {leaf.oracle}",
            f"scale {leaf.log_scale!r}",
            "anchors " + " ".join(repr(a) for a in leaf.anchors),
        ]
        lines += [_segment_line("spike", s.index, s.curve) for s in leaf.spikes]
    else:
        lines += [
            "construction e2",
            _params_line(leaf.params),
            f"oracle {leaf.oracle}",
            f"offset {leaf.offset!r}",
            f"lead_in {leaf.lead_in}",
            "anchors " + " ".join(repr(a) for a in leaf.anchors),
            _segment_line("turn", 0, leaf.turn),
        ]
        lines += [_segment_line("tail", n, piece) for n, piece in enumerate(leaf.tail)]
    return "\n".join(lines) + "\n"


def _parse_params(text: str) -> ConstructionParams:
    fields: Dict[str, str] = {}
    for token in text.split():
        key, sep, value = token.partition("=")
        if not sep:
            raise LeafFormatError(f"malformed params token {token!r}")
        fields[key] = value
    try:
        return ConstructionParams(
            delta=float(fields["delta"]),
            epsilon=float(fields["epsilon"]),
            K=float(fields["K"]),
            n_max=int(fields["n_max"]),
            samples_per_segment=int(fields["samples_per_segment"]),
        )
    except KeyError as e:
        raise LeafFormatError(f"params line is missing {e.args[0]}") from e
    except ValueError as e:
        raise LeafFormatError(f"bad params value: {e}") from e
    except FoliationError as e:
        raise LeafFormatError(f"invalid params: {e}") from e


def _parse_segment(text: str, lineno: int):
    parts = text.split()
    if len(parts) != 2 + len(_QUINTIC_FIELDS):
        raise LeafFormatError(f"line {lineno}: segment needs kind, index and {len(_QUINTIC_FIELDS)} numbers")
    try:
        index = int(parts[1])
        numbers = [float(v) for v in parts[2:]]
    except ValueError as e:
        raise LeafFormatError(f"line {lineno}: {e}") from e
    return parts[0], index, HermiteQuintic(**dict(zip(_QUINTIC_FIELDS, numbers)))


def loads(text: str) -> Leaf:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise LeafFormatError(f"not a leaf file: expected header {HEADER!r}")

    fields: Dict[str, str] = {}
    segments: List[tuple] = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        if key == "segment":
            segments.append(_parse_segment(rest, lineno))
        elif key in fields:
            raise LeafFormatError(f"line {lineno}: duplicate {key!r}")
        else:
            fields[key] = rest.strip()

    try:
        construction = fields["construction"]
        params = _parse_params(fields["params"])
        oracle = fields["oracle"]
        anchors = tuple(float(v) for v in fields["anchors"].split())
    except KeyError as e:
        raise LeafFormatError(f"leaf file is missing the {e.args[0]!r} line") from e
    except ValueError as e:
        raise LeafFormatError(f"bad anchor value: {e}") from e
    if len(anchors) != params.n_max + 1:
        raise LeafFormatError(f"expected {params.n_max + 1} anchors, found {len(anchors)}")

    try:
        if construction == "h2":
            spikes = tuple(SpikeSegment(i, curve) for kind, i, curve in segments if kind == "spike")
            if len(spikes) != len(segments) or [s.index for s in spikes] != list(range(params.n_max)):
                raise LeafFormatError(f"h2 leaf needs spike segments 0..{params.n_max - 1} in order")
            leaf: Leaf = LeafCurve(
                params=params, oracle=oracle, anchors=anchors, spikes=spikes, log_scale=float(fields.get("scale", "0.0"))
            )
        elif construction == "e2":
            turns = [curve for kind, _, curve in segments if kind == "turn"]
            tail = [(i, curve) for kind, i, curve in segments if kind == "tail"]
            if len(turns) != 1 or len(turns) + len(tail) != len(segments):
                raise LeafFormatError("e2 leaf needs exactly one turn segment followed by tail segments")
            if [i for i, _ in tail] != list(range(params.n_max)):
                raise LeafFormatError(f"e2 leaf needs tail segments 0..{params.n_max - 1} in order")
            leaf = E2LeafCurve(
                params=params,
                oracle=oracle,
                lead_in=int(fields["lead_in"]),
                turn=turns[0],
                tail=tuple(curve for _, curve in tail),
                anchors=anchors,
                offset=float(fields.get("offset", "0.0")),
            )
        else:
            raise LeafFormatError(f"unknown construction {construction!r}")
    except KeyError as e:
        raise LeafFormatError(f"leaf file is missing the {e.args[0]!r} line") from e
    except ValueError as e:
        raise LeafFormatError(str(e)) from e
    return leaf


def write_leaf(leaf: Leaf, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(dumps(leaf))
    logger.info("wrote %s leaf to %s", "h2" if isinstance(leaf, LeafCurve) else "e2", path)
    return path


def read_leaf(path: Union[str, Path]) -> Leaf:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise LeafFormatError(f"cannot read leaf file {path}: {e}") from e
    return loads(text)

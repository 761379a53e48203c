"""
Growth oracles: computable fast-growing stand-ins for the radii sequence.

Every oracle answers log_radius(n) = ln rₙ as a LogScalar, so the magnitude it
represents is ln rₙ itself and huge radii never have to be materialized.
"""
import logging
import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Dict, Optional, Tuple

from .config import settings
from .errors import DomainError, OracleError
from .hgeom import LogScalar

logger = logging.getLogger(__name__)

# tower values past this many bits are certainly saturated
_TOWER_BIT_CAP = 1 << 20


class OracleKind(str, Enum):
    TOWER = "tower"
    ACKERMANN = "ackermann_log"
    TABLE = "table"


@lru_cache(maxsize=4096)
def ackermann(m: int, n: int, step_cap: int = settings.ACKERMANN_STEP_CAP) -> int:
    """Two-argument Ackermann function on an explicit stack with a step cap."""
    if m < 0 or n < 0:
        raise DomainError("Ackermann arguments must be nonnegative")
    stack = [m]
    steps = 0
    while stack:
        steps += 1
        if steps > step_cap:
            raise OracleError(f"Ackermann A({m}, {n}) exceeded the step cap of {step_cap}")
        top = stack.pop()
        if top == 0:
            n += 1
        elif n == 0:
            stack.append(top - 1)
            n = 1
        else:
            stack.append(top - 1)
            stack.append(top)
            n -= 1
    return n


def tower(n: int) -> Optional[int]:
    """T(n) = 2^T(n−1), T(0) = 1, or None once it is hopelessly large."""
    value = 1
    for _ in range(n):
        if value > _TOWER_BIT_CAP:
            return None
        value = 1 << value
    return value


@dataclass(frozen=True)
class GrowthOracle:
    kind: OracleKind
    m: Optional[int] = None
    table: Tuple[float, ...] = ()
    source: Optional[str] = None
    _memo: Dict[int, LogScalar] = field(default_factory=dict, compare=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, compare=False, repr=False)

    def __post_init__(self):
        if self.kind == OracleKind.ACKERMANN:
            if self.m is None or self.m < 0:
                raise OracleError("ackermann_log oracle needs a nonnegative first argument m")
        elif self.kind == OracleKind.TABLE:
            if not self.table:
                raise OracleError("table oracle needs at least one entry")
            if self.table[0] < 0:
                raise OracleError("table oracle needs ln r0 >= 0")
            for i in range(1, len(self.table)):
                if not self.table[i] > self.table[i - 1]:
                    raise OracleError(f"table oracle is not strictly increasing at line {i + 1}")

    def describe(self) -> str:
        if self.kind == OracleKind.ACKERMANN:
            return f"ackermann_log:{self.m}"
        if self.kind == OracleKind.TABLE:
            if self.source:
                return f"table:{self.source}"
            return "table=" + ",".join(repr(v) for v in self.table)
        return "tower"

    def _compute(self, n: int) -> LogScalar:
        if self.kind == OracleKind.TOWER:
            value = tower(n)
            if value is None:
                return LogScalar.from_log(math.inf)
            return LogScalar.from_value(value)
        if self.kind == OracleKind.ACKERMANN:
            return LogScalar.from_value(ackermann(self.m, n))
        if n >= len(self.table):
            raise OracleError(f"table oracle has {len(self.table)} entries, asked for n={n}")
        return LogScalar.from_value(self.table[n])

    def log_radius(self, n: int) -> LogScalar:
        return log_radius(self, n)


def log_radius(oracle: GrowthOracle, n: int) -> LogScalar:
    """
    ln rₙ for the oracle, as a LogScalar.

    tower: ln rₙ = T(n), saturated from n = 5; ackermann_log: ln rₙ = A(m, n);
    table: the n-th entry.
    """
    if n < 0:
        raise DomainError(f"oracle index must be nonnegative, got {n}")
    with oracle._lock:
        cached = oracle._memo.get(n)
    if cached is not None:
        return cached
    result = oracle._compute(n)
    if result.saturated:
        logger.debug("oracle %s saturated at n=%d", oracle.describe(), n)
    with oracle._lock:
        oracle._memo[n] = result
    return result


def load_table(path: Path) -> Tuple[float, ...]:
    """One decimal ln rₙ per line; blank lines are skipped."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as e:
        raise OracleError(f"cannot read oracle table {path}: {e}") from e
    values = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError as e:
            raise OracleError(f"{path}:{lineno}: not a number: {line!r}") from e
    return tuple(values)


def parse_oracle(spec: str) -> GrowthOracle:
    """Build an oracle from "tower", "ackermann:M" or "table:PATH"."""
    spec = spec.strip()
    kind, _, arg = spec.partition(":")
    if kind == "tower" and not arg:
        return GrowthOracle(OracleKind.TOWER)
    if kind in ("ackermann", "ackermann_log"):
        try:
            return GrowthOracle(OracleKind.ACKERMANN, m=int(arg))
        except ValueError as e:
            raise OracleError(f"bad ackermann argument in oracle spec {spec!r}") from e
    if kind == "table" and arg:
        return GrowthOracle(OracleKind.TABLE, table=load_table(Path(arg)), source=arg)
    if spec.startswith("table="):
        try:
            table = tuple(float(v) for v in spec[len("table="):].split(","))
        except ValueError as e:
            raise OracleError(f"bad inline table in oracle spec {spec!r}") from e
        return GrowthOracle(OracleKind.TABLE, table=table)
    raise OracleError(f"unknown oracle spec {spec!r}; expected tower, ackermann:M or table:PATH")


_oracles: Dict[str, GrowthOracle] = {}
_oracles_lock = threading.Lock()


def get_oracle(spec: str) -> GrowthOracle:
    """Get or create the shared oracle for a spec string."""
    with _oracles_lock:
        oracle = _oracles.get(spec)
        if oracle is None:
            oracle = parse_oracle(spec)
            _oracles[spec] = oracle
        return oracle


def diagonalizer_doc() -> str:
    return (
        "The radii sequence that makes leaf distortion outgrow every recursive function is "
        "the diagonal r(n) = max over m <= n of f_m(n), taken over an enumeration f_0, f_1, ... "
        "of the total recursive functions. It is well defined but not computable: no program "
        "can decide which enumerated functions are total. Every construction here is parametric "
        "in the sequence, so computable fast-growing stand-ins are used instead:\n"
        "  tower          ln r_n = T(n), T(0) = 1, T(n) = 2^T(n-1); saturates at n = 5\n"
        "  ackermann_log  ln r_n = A(m, n) for a fixed first argument m (step-capped)\n"
        "  table          ln r_n read from a text file, one value per line\n"
        "Every claim checked by this toolkit is relative to the chosen oracle."
    )

"""Tests for growth oracles."""
import math

import pytest
from hypothesis import given, strategies as st

from foliation.errors import DomainError, OracleError
from foliation.growth import (
    GrowthOracle,
    OracleKind,
    ackermann,
    diagonalizer_doc,
    get_oracle,
    log_radius,
    parse_oracle,
    tower,
)


class TestTower:

    @pytest.mark.parametrize("n, expected", [(0, 1.0), (1, 2.0), (2, 4.0), (3, 16.0), (4, 65536.0)])
    def test_values(self, n, expected):
        assert log_radius(parse_oracle("tower"), n).value == pytest.approx(expected, rel=1e-12)

    def test_saturates_at_five(self):
        assert log_radius(parse_oracle("tower"), 5).saturated
        assert log_radius(parse_oracle("tower"), 9).saturated

    def test_exact_tower(self):
        assert tower(3) == 16
        assert tower(4) == 65536

    @given(st.integers(min_value=0, max_value=3))
    def test_strictly_increasing(self, n):
        oracle = parse_oracle("tower")
        assert log_radius(oracle, n + 1) > log_radius(oracle, n)

    def test_beats_polynomials_and_exponentials(self):
        oracle = parse_oracle("tower")
        for n in range(3, 8):
            log_t = log_radius(oracle, n).log_value
            assert log_t > 2.0 * math.log(n)
            assert log_t > n * math.log(2.0)
        for n in range(5, 8):
            assert log_radius(oracle, n).log_value > 10.0 * math.log(n)

    def test_negative_index(self):
        with pytest.raises(DomainError):
            log_radius(parse_oracle("tower"), -1)


class TestAckermann:

    @pytest.mark.parametrize(
        "m, n, expected",
        [(0, 0, 1), (1, 2, 4), (2, 3, 9), (3, 3, 61)],
    )
    def test_values(self, m, n, expected):
        assert ackermann(m, n) == expected

    def test_oracle(self):
        oracle = parse_oracle("ackermann:2")
        assert oracle.kind == OracleKind.ACKERMANN
        assert log_radius(oracle, 3).value == pytest.approx(9.0)

    def test_step_cap(self):
        with pytest.raises(OracleError, match="step cap"):
            ackermann(4, 1, step_cap=1000)


class TestTableOracle:

    def test_inline(self):
        oracle = parse_oracle("table=1.0,2.5,7.0")
        assert log_radius(oracle, 1).value == pytest.approx(2.5)
        assert oracle.describe() == "table=1.0,2.5,7.0"

    def test_from_file(self, tmp_path):
        path = tmp_path / "radii.txt"
        path.write_text("0.5\n\n1.5\n4.0\n")
        oracle = parse_oracle(f"table:{path}")
        assert oracle.table == (0.5, 1.5, 4.0)
        assert oracle.describe() == f"table:{path}"

    def test_out_of_range(self):
        with pytest.raises(OracleError, match="asked for n=3"):
            log_radius(parse_oracle("table=1,2,3"), 3)

    def test_not_increasing(self):
        with pytest.raises(OracleError, match="not strictly increasing"):
            GrowthOracle(OracleKind.TABLE, table=(1.0, 1.0))

    def test_bad_number_in_file(self, tmp_path):
        path = tmp_path / "radii.txt"
        path.write_text("1.0\nmany\n")
        with pytest.raises(OracleError, match=":2:"):
            parse_oracle(f"table:{path}")


def test_unknown_spec():
    with pytest.raises(OracleError):
        parse_oracle("busy-beaver")


def test_get_oracle_is_cached():
    assert get_oracle("tower") is get_oracle("tower")


def test_describe_round_trips_through_parse():
    for spec in ("tower", "ackermann_log:3", "table=1.0,2.0"):
        assert parse_oracle(spec).describe() == spec


def test_diagonalizer_doc():
    text = diagonalizer_doc()
    assert "not computable" in text
    assert "tower" in text
    assert "ackermann" in text

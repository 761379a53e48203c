"""Tests for run configuration loading and validation."""
import math
from pathlib import Path

import pytest

from foliation.config import RunConfig, load_run_config, settings
from foliation.errors import ConfigError
from foliation.leaf_service import ConstructionParams


class TestRunConfig:

    def test_defaults_match_settings(self):
        config = RunConfig()
        assert config.construction == "h2"
        assert config.delta_rad == settings.DEFAULT_DELTA
        assert config.n_max == settings.DEFAULT_N_MAX
        assert config.emit == settings.EMIT_CHOICES

    def test_to_params(self):
        params = RunConfig(delta_rad=0.2, n_max=1).to_params()
        assert isinstance(params, ConstructionParams)
        assert params.delta == 0.2
        assert params.n_max == 1

    def test_emit_from_comma_string(self):
        assert RunConfig(emit="csv, svg").emit == ("csv", "svg")

    def test_unknown_emit_flag(self):
        with pytest.raises(ValueError):
            RunConfig(emit="csv,png")


class TestLoadRunConfig:

    def test_reads_key_value_file(self, tmp_path: Path):
        path = tmp_path / "run.cfg"
        path.write_text("construction=e2\ndelta_rad=0.05\nepsilon=0.1\nn_max=3\n")
        config = load_run_config(path)
        assert config.construction == "e2"
        assert config.delta_rad == 0.05
        assert config.n_max == 3

    def test_overrides_win_and_none_is_ignored(self, tmp_path: Path):
        path = tmp_path / "run.cfg"
        path.write_text("n_max=3\noracle=tower\n")
        config = load_run_config(path, {"n_max": 1, "oracle": None})
        assert config.n_max == 1
        assert config.oracle == "tower"

    def test_unknown_key_rejected(self, tmp_path: Path):
        path = tmp_path / "run.cfg"
        path.write_text("delta=0.1\n")
        with pytest.raises(ConfigError, match="delta"):
            load_run_config(path)

    def test_invalid_delta_names_invariant(self):
        with pytest.raises(ConfigError, match="0 < delta < pi/4"):
            load_run_config(None, {"delta_rad": 1.0})

    def test_delta_at_quarter_pi_rejected(self):
        with pytest.raises(ConfigError):
            load_run_config(None, {"delta_rad": math.pi / 4})

    def test_e2_parabola_bound(self):
        with pytest.raises(ConfigError, match="2\\*delta <= epsilon"):
            load_run_config(None, {"construction": "e2", "delta_rad": 0.1, "epsilon": 0.1})

    def test_missing_file(self, tmp_path: Path):
        with pytest.raises(ConfigError, match="not found"):
            load_run_config(tmp_path / "absent.cfg")

    def test_config_error_exit_code(self):
        assert ConfigError.exit_code == 2

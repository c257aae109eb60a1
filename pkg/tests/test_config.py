"""Tests for configuration loading."""

from __future__ import annotations

import math
from pathlib import Path

import pytest

from causal_reg.config import AppConfig, apply_overrides, load_config
from causal_reg.estimation import INF, default_grid
from causal_reg.errors import ConfigError

EXAMPLE = Path(__file__).resolve().parent.parent / "config.yaml.example"


class TestAppConfig:
    def test_defaults(self):
        cfg = AppConfig()
        assert cfg.seed == 0
        assert cfg.threads == 1
        assert cfg.logging.level == "INFO"
        assert cfg.logging.format == "json"
        assert cfg.structure.source == "benchmark"
        assert cfg.estimation.clip_tol == math.inf
        assert cfg.data.env_labels == ["obs", "shift"]

    def test_default_grid(self):
        grid = AppConfig().grid.lambdas()
        assert grid == default_grid()
        assert len(grid) == 22
        assert grid[0] == 0.0
        assert grid[-1] is INF

    def test_lambda_accepts_inf_string(self):
        cfg = AppConfig.model_validate({"estimation": {"lam": "inf"}, "bootstrap": {"lam": "0.3"}})
        assert cfg.estimation.lam is INF
        assert cfg.bootstrap.lam == 0.3

    def test_explicit_grid_values(self):
        cfg = AppConfig.model_validate({"grid": {"values": [0, 1, "inf"]}})
        assert cfg.grid.lambdas() == [0.0, 1.0, INF]

    @pytest.mark.parametrize(
        "data",
        [
            {"grid": {"values": [1, 0]}},
            {"grid": {"values": [0, 1, 1]}},
            {"estimation": {"lam": -1}},
            {"data": {"env_labels": ["a", "a"]}},
            {"selection": {"folds": 1}},
            {"run_id": "../escape"},
            {"structure": {"source": "file", "path": "/nonexistent/structure.yaml"}},
        ],
    )
    def test_invalid_sections_rejected(self, data):
        with pytest.raises(ValueError):
            AppConfig.model_validate(data)

    def test_simulation_sizes_default_to_n(self):
        assert AppConfig.model_validate({"simulation": {"n": 50}}).simulation.sizes == (50, 50)
        cfg = AppConfig.model_validate({"simulation": {"n": 50, "n_obs": 80}})
        assert cfg.simulation.sizes == (50, 80)


class TestLoadConfig:
    def test_load_example_config(self):
        cfg = load_config(EXAMPLE)
        assert cfg.run_id == "benchmark"
        assert cfg.seed == 7
        assert cfg.estimation.clip_tol == math.inf
        assert cfg.selection.folds == 5
        assert cfg.experiment.oos_shift_scales == [100.0, 500.0, 1000.0]

    def test_load_nonexistent_file_raises(self):
        with pytest.raises(ConfigError):
            load_config("/tmp/nonexistent_config_12345.yaml")

    def test_load_none_returns_defaults(self):
        cfg = load_config(None)
        assert cfg.output_dir == "results"

    def test_env_override_log_level(self, monkeypatch):
        monkeypatch.setenv("CAUSALREG_LOG_LEVEL", "DEBUG")
        cfg = load_config(None)
        assert cfg.logging.level == "DEBUG"

    def test_env_override_log_format(self, monkeypatch):
        monkeypatch.setenv("CAUSALREG_LOG_FORMAT", "console")
        cfg = load_config(None)
        assert cfg.logging.format == "console"

    def test_env_overrides_yaml_values(self, monkeypatch):
        monkeypatch.setenv("CAUSALREG_SEED", "99")
        cfg = load_config(EXAMPLE)
        assert cfg.seed == 99
        # Non-overridden values preserved
        assert cfg.run_id == "benchmark"

    def test_load_minimal_yaml(self, tmp_path):
        p = tmp_path / "minimal.yaml"
        p.write_text("seed: 3\n")
        cfg = load_config(p)
        assert cfg.seed == 3
        # Defaults still apply for unspecified sections
        assert cfg.bootstrap.b == 100

    def test_invalid_yaml_raises_config_error(self, tmp_path):
        p = tmp_path / "broken.yaml"
        p.write_text("seed: [unclosed\n")
        with pytest.raises(ConfigError):
            load_config(p)

    def test_non_mapping_raises_config_error(self, tmp_path):
        p = tmp_path / "list.yaml"
        p.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError):
            load_config(p)

    def test_validation_error_maps_to_config_error(self, tmp_path):
        p = tmp_path / "bad.yaml"
        p.write_text("threads: 0\n")
        with pytest.raises(ConfigError) as exc_info:
            load_config(p)
        assert exc_info.value.exit_code == 2


class TestApplyOverrides:
    def test_dotted_keys(self):
        cfg = apply_overrides(AppConfig(), {"selection.folds": 3, "seed": 5})
        assert cfg.selection.folds == 3
        assert cfg.seed == 5

    def test_none_values_are_skipped(self):
        cfg = apply_overrides(AppConfig(), {"selection.folds": None})
        assert cfg.selection.folds == 5

    def test_unknown_key_raises(self):
        with pytest.raises(ConfigError):
            apply_overrides(AppConfig(), {"selection.bogus": 1})

    def test_lambda_override_is_parsed(self):
        cfg = apply_overrides(AppConfig(), {"estimation.lam": "inf"})
        assert cfg.estimation.lam is INF

    def test_grid_survives_round_trip(self):
        cfg = AppConfig.model_validate({"grid": {"values": [0, "inf"]}})
        again = apply_overrides(cfg, {"seed": 1})
        assert again.grid.lambdas() == [0.0, INF]

    def test_invalid_override_raises_config_error(self):
        with pytest.raises(ConfigError):
            apply_overrides(AppConfig(), {"bootstrap.alpha": 2.0})

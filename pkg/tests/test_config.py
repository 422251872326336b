"""
Tests for configuration loading, validation and overrides.
"""

from pathlib import Path

import pytest
import yaml

from src.errors import ConfigurationError
from src.utils.config_manager import DEFAULT_CONFIG, ConfigManager

ROOT = Path(__file__).resolve().parents[1]


def write_config(tmp_path, data, name="run.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return str(path)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("CAVITY_V_OVER_GAMMA", "CAVITY_DELTA_OMEGA", "CAVITY_OUTPUT_PATH",
                 "CAVITY_SWEEP_WORKERS", "CAVITY_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


class TestLoading:
    def test_builtin_defaults(self):
        manager = ConfigManager(None)
        config = manager.load_config()
        assert config['model']['v_over_gamma'] == 10.0
        run = manager.build_run_config(seed=5)
        assert run.model.n_cells == [1, 3, 5, 7]
        assert run.grid.count == 2001
        assert run.seed == 5

    def test_partial_file_is_merged_over_defaults(self, tmp_path):
        path = write_config(tmp_path, {'model': {'v_over_gamma': 40.0, 'n_cells': 3}})
        run = ConfigManager(path).build_run_config()
        assert run.model.v_over_gamma == 40.0
        assert run.model.n_cells == [3]
        assert run.grid.min == -6.0
        params = run.model.params()
        assert params.v == pytest.approx(40.0)
        assert params.gamma() == pytest.approx(1.0)

    def test_shipped_config_loads(self):
        run = ConfigManager(str(ROOT / "config" / "config.yaml")).build_run_config()
        assert run.output.format in ("csv", "json")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            ConfigManager(str(tmp_path / "absent.yaml")).load_config()

    def test_missing_bandwidth_ratio(self, tmp_path):
        path = write_config(tmp_path, {'model': {'delta_omega': 0.5}})
        with pytest.raises(ConfigurationError) as info:
            ConfigManager(path).load_config()
        assert info.value.field == "model.v_over_gamma"

    def test_yaml_syntax_error(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("model: [unclosed\n", encoding="utf-8")
        with pytest.raises(ConfigurationError) as info:
            ConfigManager(str(path)).load_config()
        assert info.value.field == "config"

    def test_splitting_list(self, tmp_path):
        path = write_config(tmp_path, {'model': {'v_over_gamma': 10.0, 'delta_omega': [1.0, 0.5]}})
        run = ConfigManager(path).build_run_config()
        assert run.model.detunings == [1.0, 0.5]
        assert run.model.delta_omega == 1.0
        assert run.model.params(3, 0.5).delta_omega == pytest.approx(0.5)

    def test_environment_list(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CAVITY_DELTA_OMEGA", "0.25,0.5")
        path = write_config(tmp_path, {'model': {'v_over_gamma': 10.0, 'delta_omega': [1.0]}})
        assert ConfigManager(path).build_run_config().model.detunings == [0.25, 0.5]


class TestValidation:
    @pytest.mark.parametrize("override, field", [
        ({'grid': {'min': 1.0, 'max': 1.0}}, "grid"),
        ({'grid': {'count': 1}}, "grid.count"),
        ({'model': {'v_over_gamma': -1.0}}, "model.v_over_gamma"),
        ({'model': {'delta_omega': -0.1}}, "model.delta_omega"),
        ({'model': {'delta_omega': [0.5, -1.0]}}, "model.delta_omega"),
        ({'model': {'delta_omega': []}}, "model.delta_omega"),
        ({'model': {'n_cells': 0}}, "model.n_cells"),
        ({'model': {'n_cells': [1, "two"]}}, "model.n_cells"),
        ({'analysis': {'n_range': [20, 5]}}, "analysis.n_range"),
        ({'analysis': {'dicke_detunings': 0.1}}, "analysis.dicke_detunings"),
        ({'output': {'format': 'xml'}}, "output.format"),
        ({'logging': {'level': 'CHATTY'}}, "logging.level"),
    ])
    def test_rejects(self, tmp_path, override, field):
        data = {'model': {'v_over_gamma': 10.0}}
        for section, values in override.items():
            data.setdefault(section, {}).update(values)
        with pytest.raises(ConfigurationError) as info:
            ConfigManager(write_config(tmp_path, data)).load_config()
        assert info.value.field == field


class TestOverrides:
    def test_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CAVITY_DELTA_OMEGA", "0.25")
        monkeypatch.setenv("CAVITY_SWEEP_WORKERS", "3")
        monkeypatch.setenv("CAVITY_OUTPUT_PATH", str(tmp_path / "env.csv"))
        run = ConfigManager(None).build_run_config()
        assert run.model.delta_omega == 0.25
        assert run.max_workers == 3
        assert run.output.path == str(tmp_path / "env.csv")

    def test_bad_environment_value(self, monkeypatch):
        monkeypatch.setenv("CAVITY_V_OVER_GAMMA", "wide")
        with pytest.raises(ConfigurationError) as info:
            ConfigManager(None).load_config()
        assert info.value.field == "model.v_over_gamma"

    def test_set_value_coerces_type(self):
        manager = ConfigManager(None)
        manager.load_config()
        manager.set_value("grid.count", "501")
        assert manager.get_value("grid.count") == 501
        assert manager.get_value("grid.missing", "fallback") == "fallback"


class TestDefaultFile:
    def test_create_and_reload(self, tmp_path):
        path = tmp_path / "nested" / "default.yaml"
        ConfigManager(None).create_default_config(str(path))
        loaded = ConfigManager(str(path)).load_config()
        assert loaded == DEFAULT_CONFIG

    def test_save_config(self, tmp_path):
        manager = ConfigManager(None)
        manager.load_config()
        manager.set_value("model.delta_omega", 0.5)
        target = tmp_path / "saved.yaml"
        manager.save_config(str(target))
        assert yaml.safe_load(target.read_text(encoding="utf-8"))['model']['delta_omega'] == 0.5

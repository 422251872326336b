"""
Configuration management for cavity-array transport runs.

All energies in a run configuration are in units of the reference gamma
(gamma_ref = 1). ``model.v_over_gamma`` is mandatory so the lead bandwidth
assumption is always visible in the file.
"""

import os
import copy
import yaml
import logging
from typing import Dict, Any, List, Optional
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigurationError
from ..physics.model import ModelParams


DEFAULT_CONFIG: Dict[str, Any] = {
    'model': {
        'v_over_gamma': 10.0,
        'coupling_scale': 1.0,
        'omega_c': 0.0,
        'omega0': 0.0,
        'delta_omega': 0.0,
        'n_cells': [1, 3, 5, 7],
    },
    'grid': {
        'min': -6.0,
        'max': 6.0,
        'count': 2001,
    },
    'analysis': {
        'feature': 'CentralPeak',
        'probe_detuning': 1.0,
        'n_range': [5, 20],
        'dicke_detunings': [0.05, 0.1, 0.2],
        'edge_detunings': [],
        'oracle_points': 64,
    },
    'selftest': {
        'draws': 1000,
        'unitarity_blocks': 100,
        'points_per_block': 1000,
        'max_cells': 10,
        'failure_file': 'output/selftest_failures.json',
    },
    'sweep': {
        'max_workers': 1,
        'chunk_size': 4096,
    },
    'output': {
        'format': 'csv',
        'path': 'output/spectrum.csv',
        'emit_plot_script': True,
    },
    'logging': {
        'level': 'INFO',
        'log_file': 'logs/cavity_transport.log',
        'log_format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        'max_log_size_mb': 10,
        'backup_count': 3,
    },
}


@dataclass
class ModelConfig:
    v_over_gamma: float
    coupling_scale: float
    omega_c: float
    omega0: float
    delta_omega: float
    n_cells: List[int]
    # every configured splitting; delta_omega is the first
    detunings: List[float] = field(default_factory=list)

    def params(self, n_cells: Optional[int] = None, delta_omega: Optional[float] = None) -> ModelParams:
        return ModelParams.from_gamma_units(
            v_over_gamma=self.v_over_gamma,
            omega_c=self.omega_c,
            omega0=self.omega0,
            delta_omega=self.delta_omega if delta_omega is None else delta_omega,
            n_cells=self.n_cells[0] if n_cells is None else n_cells,
            coupling_scale=self.coupling_scale,
        )


@dataclass
class GridConfig:
    min: float
    max: float
    count: int


@dataclass
class AnalysisConfig:
    feature: str
    probe_detuning: float
    n_range: List[int]
    dicke_detunings: List[float]
    edge_detunings: List[float]
    oracle_points: int


@dataclass
class SelftestConfig:
    draws: int
    unitarity_blocks: int
    points_per_block: int
    max_cells: int
    failure_file: Optional[str]


@dataclass
class OutputConfig:
    format: str
    path: str
    emit_plot_script: bool


@dataclass
class RunConfig:
    model: ModelConfig
    grid: GridConfig
    analysis: AnalysisConfig
    selftest: SelftestConfig
    output: OutputConfig
    max_workers: int = 1
    chunk_size: int = 4096
    seed: int = 0


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    """Manage configuration loading and validation."""

    def __init__(self, config_path: Optional[str] = "config/config.yaml"):
        """Initialize configuration manager; ``None`` means built-in defaults."""
        self.config_path = config_path
        self.config: Dict[str, Any] = {}
        self.logger = logging.getLogger(__name__)

    def load_config(self) -> Dict[str, Any]:
        """
        Load configuration from file.

        Raises:
            FileNotFoundError: when the file does not exist
            ConfigurationError: on YAML syntax errors or invalid values
        """
        if self.config_path is None:
            self.config = copy.deepcopy(DEFAULT_CONFIG)
        else:
            if not os.path.exists(self.config_path):
                raise FileNotFoundError(f"Configuration file not found: {self.config_path}")

            with open(self.config_path, 'r', encoding='utf-8') as f:
                try:
                    loaded = yaml.safe_load(f) or {}
                except yaml.YAMLError as e:
                    raise ConfigurationError(f"Cannot parse {self.config_path}: {e}", "config") from e

            if not isinstance(loaded, dict):
                raise ConfigurationError("Configuration root must be a mapping", "config")
            if not isinstance(loaded.get('model'), dict) or 'v_over_gamma' not in loaded['model']:
                raise ConfigurationError("Missing required configuration: model.v_over_gamma", "model.v_over_gamma")
            self.config = _deep_merge(DEFAULT_CONFIG, loaded)

        self._apply_env_overrides()
        self._validate_config()
        self.logger.info(f"Configuration loaded from {self.config_path or 'built-in defaults'}")
        return self.config

    def _validate_config(self):
        """Validate configuration structure and values."""
        required_sections = ['model', 'grid', 'analysis', 'selftest', 'sweep', 'output', 'logging']
        for section in required_sections:
            if not isinstance(self.config.get(section), dict):
                raise ConfigurationError(f"Missing required configuration section: {section}", section)

        numeric_validations = [
            ('model.v_over_gamma', float, 1e-6, 1e12),
            ('model.coupling_scale', float, 0.0, 1e6),
            ('model.omega_c', float, -1e12, 1e12),
            ('model.omega0', float, -1e12, 1e12),
            ('grid.min', float, -1e12, 1e12),
            ('grid.max', float, -1e12, 1e12),
            ('grid.count', int, 2, 10_000_000),
            ('analysis.probe_detuning', float, -1e12, 1e12),
            ('analysis.oracle_points', int, 0, 100_000),
            ('selftest.draws', int, 1, 10_000_000),
            ('selftest.unitarity_blocks', int, 1, 1_000_000),
            ('selftest.points_per_block', int, 1, 10_000_000),
            ('selftest.max_cells', int, 1, 10_000),
            ('sweep.max_workers', int, 1, 256),
            ('sweep.chunk_size', int, 1, 10_000_000),
            ('logging.max_log_size_mb', int, 1, 10_000),
            ('logging.backup_count', int, 0, 100),
        ]

        for path, data_type, min_val, max_val in numeric_validations:
            value = self._get_nested_value(path)
            if value is None:
                raise ConfigurationError(f"Missing required configuration: {path}", path)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigurationError(f"Configuration {path} must be numeric, got {value!r}", path)
            if data_type is int and not float(value).is_integer():
                raise ConfigurationError(f"Configuration {path} must be an integer, got {value!r}", path)
            if value < min_val or value > max_val:
                raise ConfigurationError(f"Configuration {path} must be between {min_val} and {max_val}", path)

        grid = self.config['grid']
        if not grid['min'] < grid['max']:
            raise ConfigurationError(f"grid min ({grid['min']}) must be below grid max ({grid['max']})", "grid")

        delta_omega = self.config['model'].get('delta_omega')
        splittings = delta_omega if isinstance(delta_omega, list) else [delta_omega]
        if not splittings or any(isinstance(d, bool) or not isinstance(d, (int, float)) or not 0 <= d <= 1e12
                                 for d in splittings):
            raise ConfigurationError(f"model.delta_omega must be a non-negative number or list of them, "
                                     f"got {delta_omega!r}", "model.delta_omega")

        n_cells = self.config['model']['n_cells']
        cells = n_cells if isinstance(n_cells, list) else [n_cells]
        if not cells or any(isinstance(n, bool) or not isinstance(n, int) or n < 1 for n in cells):
            raise ConfigurationError(f"model.n_cells must be a positive integer or list of them, got {n_cells!r}",
                                     "model.n_cells")

        n_range = self.config['analysis']['n_range']
        if (not isinstance(n_range, list) or len(n_range) != 2
                or not all(isinstance(n, int) and n >= 1 for n in n_range) or n_range[0] >= n_range[1]):
            raise ConfigurationError(f"analysis.n_range must be [first, last] with 1 <= first < last, got {n_range!r}",
                                     "analysis.n_range")

        for key in ('dicke_detunings', 'edge_detunings'):
            values = self.config['analysis'][key]
            if not isinstance(values, list) or any(
                    isinstance(d, bool) or not isinstance(d, (int, float)) or d < 0 for d in values):
                raise ConfigurationError(f"analysis.{key} must be a list of non-negative numbers", f"analysis.{key}")

        output_format = self.config['output']['format']
        if output_format not in ('csv', 'json'):
            raise ConfigurationError(f"output.format must be csv or json, got {output_format!r}", "output.format")
        if not self.config['output'].get('path'):
            raise ConfigurationError("output.path must be set", "output.path")

        log_level = str(self.config['logging'].get('level', 'INFO')).upper()
        if log_level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR'):
            raise ConfigurationError(f"logging.level {log_level!r} is not a valid level", "logging.level")

    def _get_nested_value(self, path: str) -> Any:
        """Get value from nested configuration path."""
        keys = path.split('.')
        value = self.config

        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return None

        return value

    def _apply_env_overrides(self):
        """Apply environment variable overrides to configuration."""
        env_mappings = {
            'CAVITY_V_OVER_GAMMA': 'model.v_over_gamma',
            'CAVITY_DELTA_OMEGA': 'model.delta_omega',
            'CAVITY_OUTPUT_PATH': 'output.path',
            'CAVITY_SWEEP_WORKERS': 'sweep.max_workers',
            'CAVITY_LOG_LEVEL': 'logging.level',
        }

        for env_var, config_path in env_mappings.items():
            env_value = os.getenv(env_var)
            if env_value is not None:
                try:
                    self._set_nested_value(config_path, env_value)
                except ValueError as e:
                    raise ConfigurationError(f"Bad value for {env_var}: {e}", config_path) from e
                self.logger.info(f"Applied environment override: {env_var} -> {config_path}")

    def _set_nested_value(self, path: str, value: Any):
        """Set value in nested configuration path."""
        keys = path.split('.')
        config = self.config

        for key in keys[:-1]:
            if key not in config:
                config[key] = {}
            config = config[key]

        final_key = keys[-1]

        # Try to convert to appropriate type based on existing value
        if final_key in config:
            existing_value = config[final_key]
            if isinstance(existing_value, list) and existing_value and isinstance(value, str):
                convert = type(existing_value[0])
                value = [convert(part) for part in value.split(',')]
            elif isinstance(existing_value, bool):
                value = str(value).lower() in ('true', '1', 'yes', 'on')
            elif isinstance(existing_value, int):
                value = int(value)
            elif isinstance(existing_value, float):
                value = float(value)

        config[final_key] = value

    def set_value(self, path: str, value: Any):
        """Set a value by dotted path (CLI overrides)."""
        self._set_nested_value(path, value)

    def get_value(self, path: str, default: Any = None) -> Any:
        """Get a specific configuration value by path."""
        value = self._get_nested_value(path)
        return value if value is not None else default

    def build_run_config(self, seed: int = 0) -> RunConfig:
        """Typed view of the validated configuration."""
        if not self.config:
            self.load_config()
        self._validate_config()
        c = self.config
        n_cells = c['model']['n_cells']
        delta_omega = c['model']['delta_omega']
        detunings = [float(d) for d in (delta_omega if isinstance(delta_omega, list) else [delta_omega])]
        model = ModelConfig(
            v_over_gamma=float(c['model']['v_over_gamma']),
            coupling_scale=float(c['model']['coupling_scale']),
            omega_c=float(c['model']['omega_c']),
            omega0=float(c['model']['omega0']),
            delta_omega=detunings[0],
            n_cells=list(n_cells) if isinstance(n_cells, list) else [n_cells],
            detunings=detunings,
        )
        try:
            model.params()
        except ConfigurationError as e:
            raise ConfigurationError(f"Invalid model: {e}", f"model.{e.field}") from e

        analysis = c['analysis']
        return RunConfig(
            model=model,
            grid=GridConfig(min=float(c['grid']['min']), max=float(c['grid']['max']), count=int(c['grid']['count'])),
            analysis=AnalysisConfig(
                feature=str(analysis['feature']),
                probe_detuning=float(analysis['probe_detuning']),
                n_range=[int(n) for n in analysis['n_range']],
                dicke_detunings=[float(d) for d in analysis['dicke_detunings']],
                edge_detunings=[float(d) for d in analysis['edge_detunings']],
                oracle_points=int(analysis['oracle_points']),
            ),
            selftest=SelftestConfig(
                draws=int(c['selftest']['draws']),
                unitarity_blocks=int(c['selftest']['unitarity_blocks']),
                points_per_block=int(c['selftest']['points_per_block']),
                max_cells=int(c['selftest']['max_cells']),
                failure_file=c['selftest'].get('failure_file'),
            ),
            output=OutputConfig(
                format=str(c['output']['format']),
                path=str(c['output']['path']),
                emit_plot_script=bool(c['output']['emit_plot_script']),
            ),
            max_workers=int(c['sweep']['max_workers']),
            chunk_size=int(c['sweep']['chunk_size']),
            seed=int(seed),
        )

    def save_config(self, output_path: Optional[str] = None):
        """Save current configuration to file."""
        output_path = output_path or self.config_path

        try:
            Path(output_path).parent.mkdir(parents=True, exist_ok=True)

            with open(output_path, 'w', encoding='utf-8') as f:
                yaml.dump(self.config, f, default_flow_style=False, indent=2, sort_keys=False)

            self.logger.info(f"Configuration saved to {output_path}")

        except Exception as e:
            self.logger.error(f"Failed to save configuration: {e}")
            raise

    def print_config(self):
        """Print current configuration in a readable format."""
        print("\n" + "="*60)
        print("CURRENT CONFIGURATION")
        print("="*60)

        def print_section(data, indent=0):
            for key, value in data.items():
                if isinstance(value, dict):
                    print("  " * indent + f"{key}:")
                    print_section(value, indent + 1)
                else:
                    print("  " * indent + f"{key}: {value}")

        print_section(self.config)
        print("="*60 + "\n")

    def create_default_config(self, output_path: str):
        """Create a default configuration file."""
        self.config = copy.deepcopy(DEFAULT_CONFIG)
        self.save_config(output_path)

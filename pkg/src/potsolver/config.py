"""Configuration management module."""

import copy
import os
import re
from pathlib import Path
from typing import Any, Dict

import yaml

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "solver": {
        "algo": "ptop",
        "threads": 1,
        "strict_determinism": False,
        "brute_max_n": 8,
        "local_consistency_k": 4,
    },
    "generator": {
        "density": 0.5,
        "mode": "uniform",
        "edge_probability": 0.3,
    },
    "bench": {
        "timeout_ms": 60000,
        "per_size": 5,
    },
    "logging": {
        "level": "WARNING",
        "to_file": False,
        "file": "logs/potsolver.log",
    },
}


class Config:
    """Configuration loader and validator."""

    def __init__(self, config_path: str | None = None):
        """Initialize configuration.

        Args:
            config_path: Path to configuration file. Defaults to env var
                        POTSOLVER_CONFIG, then config.yaml in the working
                        directory; a missing implicit default falls back to
                        built-in defaults.
        """
        explicit = config_path is not None or "POTSOLVER_CONFIG" in os.environ
        if config_path is None:
            config_path = os.getenv("POTSOLVER_CONFIG", "config.yaml")

        self.config_path = Path(config_path)
        self._config: Dict[str, Any] = copy.deepcopy(DEFAULTS)
        if explicit or self.config_path.exists():
            self._load_config()

    def _load_config(self) -> None:
        """Load and validate configuration file."""
        if not self.config_path.exists():
            raise FileNotFoundError(
                f"Config file not found: {self.config_path}\n"
                f"Pass --config with an existing file or unset POTSOLVER_CONFIG."
            )

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                content = self._replace_env_vars(f.read())
                loaded = yaml.safe_load(content) or {}
        except yaml.YAMLError as e:
            raise ValueError(f"Invalid YAML in config file: {e}")

        if not isinstance(loaded, dict):
            raise ValueError("Config file must contain a mapping of sections")
        for section, values in loaded.items():
            if section not in DEFAULTS:
                raise ValueError(f"Unknown config section '{section}'")
            if values is None:
                continue
            if not isinstance(values, dict):
                raise ValueError(f"'{section}' must be a mapping")
            self._config[section].update(values)

        self._validate_config()

    def _replace_env_vars(self, content: str) -> str:
        """Replace ${VAR_NAME} with environment variable values."""
        pattern = r'\$\{([^}]+)\}'

        def replacer(match):
            var_name = match.group(1)
            value = os.getenv(var_name)
            if value is None:
                raise ValueError(
                    f"Environment variable {var_name} not found. "
                    f"Please set it or update config file."
                )
            return value

        return re.sub(pattern, replacer, content)

    def _validate_config(self) -> None:
        """Validate configuration values."""
        solver = self._config['solver']
        if solver['algo'] not in ('ptop', 'total', 'brute'):
            raise ValueError(f"solver.algo must be ptop, total or brute, got {solver['algo']!r}")
        if int(solver['threads']) < 1:
            raise ValueError("solver.threads must be at least 1")
        if int(solver['brute_max_n']) < 1:
            raise ValueError("solver.brute_max_n must be at least 1")
        if not 2 <= int(solver['local_consistency_k']) <= 5:
            raise ValueError("solver.local_consistency_k must lie in 2..5")

        generator = self._config['generator']
        if not 0.0 <= float(generator['density']) <= 1.0:
            raise ValueError("generator.density must lie in [0, 1]")
        if not 0.0 <= float(generator['edge_probability']) <= 1.0:
            raise ValueError("generator.edge_probability must lie in [0, 1]")
        if generator['mode'] not in ('planted', 'uniform'):
            raise ValueError("generator.mode must be planted or uniform")

        bench = self._config['bench']
        if float(bench['timeout_ms']) <= 0:
            raise ValueError("bench.timeout_ms must be positive")
        if int(bench['per_size']) < 1:
            raise ValueError("bench.per_size must be at least 1")

    @property
    def algo(self) -> str:
        """Get default solver algorithm."""
        return self._config['solver']['algo']

    @property
    def threads(self) -> int:
        """Get default worker count."""
        return int(self._config['solver']['threads'])

    @property
    def strict_determinism(self) -> bool:
        """Get whether the sequential scan is forced."""
        return bool(self._config['solver']['strict_determinism'])

    @property
    def brute_max_n(self) -> int:
        """Get size guard of the brute-force solver."""
        return int(self._config['solver']['brute_max_n'])

    @property
    def local_consistency_k(self) -> int:
        """Get subset size used by the local consistency rule."""
        return int(self._config['solver']['local_consistency_k'])

    @property
    def density(self) -> float:
        """Get probability that a pair is constrained."""
        return float(self._config['generator']['density'])

    @property
    def gen_mode(self) -> str:
        """Get default generator mode."""
        return self._config['generator']['mode']

    @property
    def edge_probability(self) -> float:
        """Get planted order edge probability."""
        return float(self._config['generator']['edge_probability'])

    @property
    def timeout_ms(self) -> float:
        """Get per-instance benchmark timeout in milliseconds."""
        return float(self._config['bench']['timeout_ms'])

    @property
    def per_size(self) -> int:
        """Get benchmark instances per size."""
        return int(self._config['bench']['per_size'])

    @property
    def log_level(self) -> str:
        """Get logging level."""
        return self._config['logging']['level']

    @property
    def log_to_file(self) -> bool:
        """Get whether to log to file.

        Returns:
            True if logging to file is enabled (default: False)
        """
        return bool(self._config['logging'].get('to_file', False))

    @property
    def log_file(self) -> str | None:
        """Get log file path.

        Returns:
            Log file path if log_to_file is True, None otherwise
        """
        if not self.log_to_file:
            return None
        return self._config['logging'].get('file', 'logs/potsolver.log')

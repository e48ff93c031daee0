"""
Configuration Management Module

Handles laboratory configuration using environment variables
and .env files with python-dotenv.
"""

import os
import logging
from pathlib import Path
from typing import Optional, Dict, Any
from dotenv import load_dotenv
from dataclasses import dataclass, field

from ..errors import ConfigError

# Configure logger
logger = logging.getLogger(__name__)

ENV_PREFIX = "ERGMLAB_"


@dataclass
class LabConfig:
    """Laboratory configuration data class"""

    # Logging
    log_level: str = "INFO"
    debug_mode: bool = False
    enable_run_log: bool = True
    run_log_path: str = str(Path.home() / ".ergmlab" / "logs" / "runs.log")

    # Fixed-point solver
    solver_tol: float = 1e-12
    grid_points: int = 10_000
    root_merge_tol: float = 1e-8
    subcritical_margin: float = 1e-9
    tangency_tol: float = 1e-9

    # Monte Carlo
    inner_draws: int = 32
    batch_count: int = 20
    min_ess: float = 100.0
    importance_min_ess: float = 50.0
    workers: int = 0  # 0 = auto-detect from host

    # Sampler
    max_cftp_sweeps: int = 2**20
    check_monotone: bool = True

    # Size caps
    exact_max_n: int = 6
    template_max_v: int = 8
    template_max_e: int = 12

    # Hoeffding blocks: "amended" multiplies the all-blocks term by M(P)
    hoeffding_multiplicity: str = "amended"  # amended, original

    # Reports
    report_schema_version: str = "1.0"

    # Paths
    config_dir: Path = field(default_factory=lambda: Path.home() / ".ergmlab")
    log_dir: Path = field(default_factory=lambda: Path.home() / ".ergmlab" / "logs")


def _env_bool(name: str, default: bool) -> bool:
    return os.getenv(ENV_PREFIX + name, str(default)).lower() == "true"


class ConfigManager:
    """Manages laboratory configuration"""

    def __init__(self, env_file: Optional[Path] = None, create_dirs: bool = True):
        """
        Initialize configuration manager

        Args:
            env_file: Path to .env file (default: .env in working directory)
            create_dirs: Create log directories when they are missing
        """
        self.config = LabConfig()
        self.env_file = env_file or Path(".env")
        self.create_dirs = create_dirs
        self._load_config()

    def _load_config(self):
        """Load configuration from environment variables and .env file"""
        if self.env_file.exists():
            load_dotenv(self.env_file)

        cfg = self.config
        try:
            cfg.log_level = os.getenv(ENV_PREFIX + "LOG_LEVEL", cfg.log_level)
            cfg.debug_mode = _env_bool("DEBUG_MODE", cfg.debug_mode)
            cfg.enable_run_log = _env_bool("ENABLE_RUN_LOG", cfg.enable_run_log)
            cfg.run_log_path = os.getenv(ENV_PREFIX + "RUN_LOG_PATH", cfg.run_log_path)

            cfg.solver_tol = float(os.getenv(ENV_PREFIX + "SOLVER_TOL", cfg.solver_tol))
            cfg.grid_points = int(os.getenv(ENV_PREFIX + "GRID_POINTS", cfg.grid_points))
            cfg.root_merge_tol = float(os.getenv(ENV_PREFIX + "ROOT_MERGE_TOL", cfg.root_merge_tol))
            cfg.subcritical_margin = float(
                os.getenv(ENV_PREFIX + "SUBCRITICAL_MARGIN", cfg.subcritical_margin)
            )
            cfg.tangency_tol = float(os.getenv(ENV_PREFIX + "TANGENCY_TOL", cfg.tangency_tol))

            cfg.inner_draws = int(os.getenv(ENV_PREFIX + "INNER_DRAWS", cfg.inner_draws))
            cfg.batch_count = int(os.getenv(ENV_PREFIX + "BATCH_COUNT", cfg.batch_count))
            cfg.min_ess = float(os.getenv(ENV_PREFIX + "MIN_ESS", cfg.min_ess))
            cfg.importance_min_ess = float(
                os.getenv(ENV_PREFIX + "IMPORTANCE_MIN_ESS", cfg.importance_min_ess)
            )
            cfg.workers = int(os.getenv(ENV_PREFIX + "WORKERS", cfg.workers))

            cfg.max_cftp_sweeps = int(os.getenv(ENV_PREFIX + "MAX_CFTP_SWEEPS", cfg.max_cftp_sweeps))
            cfg.check_monotone = _env_bool("CHECK_MONOTONE", cfg.check_monotone)

            cfg.exact_max_n = int(os.getenv(ENV_PREFIX + "EXACT_MAX_N", cfg.exact_max_n))
            cfg.template_max_v = int(os.getenv(ENV_PREFIX + "TEMPLATE_MAX_V", cfg.template_max_v))
            cfg.template_max_e = int(os.getenv(ENV_PREFIX + "TEMPLATE_MAX_E", cfg.template_max_e))

            cfg.hoeffding_multiplicity = os.getenv(
                ENV_PREFIX + "HOEFFDING_MULTIPLICITY", cfg.hoeffding_multiplicity
            )
        except ValueError as e:
            raise ConfigError(f"Invalid numeric configuration value: {e}") from e

        if os.getenv(ENV_PREFIX + "LOG_DIR"):
            cfg.log_dir = Path(os.getenv(ENV_PREFIX + "LOG_DIR"))

        if self.create_dirs:
            cfg.log_dir.mkdir(parents=True, exist_ok=True)

        self.validate()

    def validate(self):
        """
        Validate configuration settings.

        Unknown enumerations are reset to defaults with a warning; values
        that would make the numerics meaningless raise ConfigError.
        """
        cfg = self.config
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if cfg.log_level.upper() not in valid_levels:
            logger.warning(
                f"Invalid log level '{cfg.log_level}'. "
                f"Valid values are: {', '.join(valid_levels)}. Defaulting to 'INFO'."
            )
            cfg.log_level = "INFO"

        if cfg.hoeffding_multiplicity not in ("amended", "original"):
            logger.warning(
                f"Invalid hoeffding_multiplicity '{cfg.hoeffding_multiplicity}'. "
                "Defaulting to 'amended'."
            )
            cfg.hoeffding_multiplicity = "amended"

        if cfg.inner_draws < 1:
            logger.warning(f"inner_draws must be >= 1, got {cfg.inner_draws}. Defaulting to 32.")
            cfg.inner_draws = 32

        if cfg.batch_count < 2:
            logger.warning(f"batch_count must be >= 2, got {cfg.batch_count}. Defaulting to 20.")
            cfg.batch_count = 20

        if cfg.solver_tol <= 0:
            raise ConfigError(f"solver_tol must be positive, got {cfg.solver_tol}")
        if cfg.grid_points < 10:
            raise ConfigError(f"grid_points must be at least 10, got {cfg.grid_points}")
        if cfg.exact_max_n > 6:
            logger.warning(
                f"exact_max_n={cfg.exact_max_n} exceeds the enumeration cap; using 6."
            )
            cfg.exact_max_n = 6

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by key"""
        return getattr(self.config, key, default)

    def set(self, key: str, value: Any):
        """Set configuration value"""
        if hasattr(self.config, key):
            setattr(self.config, key, value)

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary"""
        return {
            k: str(v) if isinstance(v, Path) else v
            for k, v in self.config.__dict__.items()
        }


# Global configuration instance
_config_manager: Optional[ConfigManager] = None


def get_config() -> LabConfig:
    """Get global configuration instance"""
    return get_config_manager().config


def get_config_manager() -> ConfigManager:
    """Get global configuration manager instance"""
    global _config_manager
    if _config_manager is None:
        _config_manager = ConfigManager()
    return _config_manager


def reset_config() -> None:
    """Drop the global instance so the next access re-reads the environment"""
    global _config_manager
    _config_manager = None

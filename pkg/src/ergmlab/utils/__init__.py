"""Utility modules for ergmlab."""

from .config import ConfigManager, LabConfig, get_config, get_config_manager, reset_config
from .run_log import RunLogger
from .system_info import HostInfo, get_host_info, recommended_workers

__all__ = [
    'LabConfig',
    'ConfigManager',
    'get_config',
    'get_config_manager',
    'reset_config',
    'RunLogger',
    'HostInfo',
    'get_host_info',
    'recommended_workers',
]

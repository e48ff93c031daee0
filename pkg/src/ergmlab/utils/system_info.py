"""
System Information Detection Module

Detects CPU and RAM of the host with psutil. Used to pick the number of
worker processes for independent chains and to stamp report metadata.
"""

import psutil
import platform
from typing import Dict, Any
from dataclasses import dataclass, asdict

# Rough resident size of one chain worker
WORKER_MEMORY_GB = 0.25


@dataclass
class HostInfo:
    """Host information data class"""
    cpu_count: int
    physical_cores: int
    total_ram_gb: float
    available_ram_gb: float
    platform: str
    python_version: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def get_host_info() -> HostInfo:
    """Get CPU, memory and platform information"""
    mem = psutil.virtual_memory()
    return HostInfo(
        cpu_count=psutil.cpu_count(logical=True) or 1,
        physical_cores=psutil.cpu_count(logical=False) or 1,
        total_ram_gb=mem.total / (1024 ** 3),
        available_ram_gb=mem.available / (1024 ** 3),
        platform=platform.system(),
        python_version=platform.python_version(),
    )


def recommended_workers(requested: int = 0) -> int:
    """
    Number of worker processes for parallel chains.

    Args:
        requested: Explicit worker count; 0 or less means auto-detect

    Returns:
        requested when positive, else physical cores capped by available RAM
    """
    if requested > 0:
        return requested
    info = get_host_info()
    by_memory = int(info.available_ram_gb / WORKER_MEMORY_GB)
    return max(1, min(info.physical_cores, by_memory))

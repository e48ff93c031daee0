"""
Command line front end.
"""

from .main import main, run
from .registry import BaseCommand, CommandRegistry, CommandResult, RunConfig, get_command_registry

__all__ = [
    'run',
    'main',
    'BaseCommand',
    'CommandRegistry',
    'CommandResult',
    'RunConfig',
    'get_command_registry',
]

"""Command registry for the ergmlab command line."""

import argparse
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..errors import ConfigError
from ..model import ErgmSpec, load_spec

logger = logging.getLogger(__name__)


@dataclass
class RunConfig:
    """Parsed knobs of one invocation"""
    subcommand: str
    spec_path: Optional[Path] = None
    n: Optional[int] = None
    ns: List[int] = field(default_factory=list)
    samples: Optional[int] = None
    burn: Optional[int] = None
    thin: int = 1
    tol: Optional[float] = None
    outer: Optional[int] = None
    inner: Optional[int] = None
    seed: Optional[int] = None
    report_path: Optional[Path] = None
    out_path: Optional[Path] = None
    no_timestamp: bool = False
    args: argparse.Namespace = field(default_factory=argparse.Namespace, repr=False)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        def get(name, default=None):
            return getattr(args, name, default)

        return cls(
            subcommand=args.command,
            spec_path=Path(args.spec) if get("spec") else None,
            n=get("n"),
            ns=list(get("ns") or []),
            samples=get("samples"),
            burn=get("burn"),
            thin=get("thin", 1) or 1,
            tol=get("tol"),
            outer=get("outer"),
            inner=get("inner"),
            seed=get("seed"),
            report_path=Path(args.report) if get("report") else None,
            out_path=Path(args.out) if get("out") else None,
            no_timestamp=bool(get("no_timestamp", False)),
            args=args,
        )

    def load_spec(self) -> ErgmSpec:
        if self.spec_path is None:
            raise ConfigError(f"'{self.subcommand}' needs --spec")
        return load_spec(self.spec_path)

    def parameters(self) -> Dict[str, Any]:
        return {k: v for k, v in vars(self.args).items() if k != "handler"}


@dataclass
class CommandResult:
    """Report body plus any tabular outputs written next to it"""
    report: Dict[str, Any]
    exit_code: int = 0
    tables: Dict[Path, List[Dict[str, Any]]] = field(default_factory=dict)
    text_outputs: Dict[Path, str] = field(default_factory=dict)


def int_list(text: str) -> List[int]:
    """argparse type for comma separated sizes such as 20,40,80"""
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got '{text}'")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


class BaseCommand(ABC):
    """Abstract base class for subcommands."""

    stochastic: bool = False

    def __init__(self):
        self._validate_command_definition()

    @property
    @abstractmethod
    def name(self) -> str:
        """Subcommand name."""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """One-line help text."""
        pass

    @abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Declare the subcommand's own options."""
        pass

    @abstractmethod
    def execute(self, run: RunConfig) -> CommandResult:
        """Run the subcommand; library errors propagate to the caller."""
        pass

    def uses_seed(self, run: RunConfig) -> bool:
        """Whether this invocation draws random numbers and so needs a recorded seed."""
        return self.stochastic

    def _validate_command_definition(self) -> None:
        if not self.name:
            raise ValueError("Command name cannot be empty")
        if not self.description:
            raise ValueError("Command description cannot be empty")

    def add_common_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--report", help="Write the JSON report to this path instead of stdout")
        parser.add_argument("--no-timestamp", action="store_true",
                            help="Leave timestamps and host details out of reports")
        if self.stochastic:
            parser.add_argument("--seed", type=int, help="Seed; generated and recorded when omitted")


class CommandRegistry:
    """Registry for managing subcommands."""

    def __init__(self):
        self._commands: Dict[str, BaseCommand] = {}
        logger.debug("Command registry initialized")

    def register(self, command: BaseCommand) -> None:
        """
        Register a command.

        Raises:
            ValueError: If a command with the same name already exists
        """
        if command.name in self._commands:
            raise ValueError(f"Command '{command.name}' is already registered")
        self._commands[command.name] = command
        logger.debug(f"Registered command: {command.name}")

    def unregister(self, name: str) -> None:
        if name not in self._commands:
            raise KeyError(f"Command '{name}' not found in registry")
        del self._commands[name]

    def get(self, name: str) -> Optional[BaseCommand]:
        command = self._commands.get(name)
        if command is None:
            logger.warning(f"Command '{name}' not found in registry")
        return command

    def list_commands(self) -> List[BaseCommand]:
        return list(self._commands.values())

    def build_parser(self) -> argparse.ArgumentParser:
        """Top-level parser with one subparser per registered command."""
        parser = argparse.ArgumentParser(
            prog="ergmlab",
            description="Simulation and verification lab for exponential random graph models",
        )
        parser.add_argument("--log-level", help="Override the configured log level")
        subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
        for command in self.list_commands():
            sub = subparsers.add_parser(command.name, help=command.description,
                                        description=command.description)
            command.add_arguments(sub)
            command.add_common_arguments(sub)
        return parser

    def __contains__(self, name: str) -> bool:
        return name in self._commands

    def __len__(self) -> int:
        return len(self._commands)


_global_registry: Optional[CommandRegistry] = None


def get_command_registry() -> CommandRegistry:
    """Global registry with the built-in commands registered."""
    global _global_registry
    if _global_registry is None:
        from .commands import initialize_builtin_commands

        _global_registry = CommandRegistry()
        initialize_builtin_commands(_global_registry)
    return _global_registry

"""
ergmlab - command line entrypoint

Parses arguments, loads configuration, runs one subcommand and writes its
JSON report and CSV tables. Exit codes: 0 success, 1 identity violations,
2 bad configuration or arguments, 3 module precondition failures.
"""

import csv
import json
import logging
import sys
import time
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..errors import ConfigError, LabError
from ..sampling import resolve_seed
from ..utils.config import ConfigManager, get_config_manager
from ..utils.run_log import RunLogger
from ..utils.system_info import get_host_info
from .registry import CommandResult, RunConfig, get_command_registry

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECONDITION = 3

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(level: str, log_dir: Optional[Path] = None) -> None:
    """Configure the root logger on stderr, plus a file in log_dir when given."""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_dir is not None:
        try:
            handlers.append(logging.FileHandler(Path(log_dir) / "ergmlab.log", encoding="utf-8"))
        except OSError as e:
            print(f"Cannot open log file in {log_dir}: {e}", file=sys.stderr)
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, handlers=handlers)


def _json_default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, (np.ndarray, tuple, set, frozenset)):
        return list(value.tolist() if isinstance(value, np.ndarray) else value)
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def build_report(result: CommandResult, run: RunConfig, manager: ConfigManager) -> Dict[str, Any]:
    """Wrap a command's body with schema version, seed and configuration."""
    report: Dict[str, Any] = {
        "schema_version": manager.config.report_schema_version,
        "subcommand": run.subcommand,
        "seed": run.seed,
        "config": manager.to_dict(),
        "result": result.report,
    }
    if not run.no_timestamp:
        report["generated_at"] = datetime.now().isoformat()
        report["host"] = get_host_info().to_dict()
    return report


def write_csv(path: Path, rows: Sequence[Dict[str, Any]]) -> None:
    """CSV with a header row; columns are the union of row keys in first-seen order."""
    columns: List[str] = []
    for row in rows:
        columns.extend(k for k in row if k not in columns)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)


def write_outputs(result: CommandResult, run: RunConfig, manager: ConfigManager) -> List[str]:
    """Write the report and every table; returns the paths written."""
    written = []
    text = json.dumps(build_report(result, run, manager), indent=2, sort_keys=True,
                      default=_json_default)
    if run.report_path:
        run.report_path.parent.mkdir(parents=True, exist_ok=True)
        run.report_path.write_text(text + "\n", encoding="utf-8")
        written.append(str(run.report_path))
    else:
        print(text)
    for path, rows in result.tables.items():
        write_csv(path, rows)
        written.append(str(path))
    for path, content in result.text_outputs.items():
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8")
        written.append(str(path))
    return written


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name (default sys.argv[1:])

    Returns:
        Process exit code
    """
    registry = get_command_registry()
    parser = registry.build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG

    try:
        manager = get_config_manager()
    except ConfigError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    config = manager.config
    setup_logging(args.log_level or config.log_level, config.log_dir if config.debug_mode else None)

    run_config = RunConfig.from_args(args)
    command = registry.get(args.command)
    if command.uses_seed(run_config):
        run_config.seed = resolve_seed(run_config.seed)

    run_logger = RunLogger(config, include_timestamps=not run_config.no_timestamp)
    run_logger.log_run_started(command.name, run_config.parameters(), run_config.seed)
    started = time.perf_counter()
    outputs: List[str] = []
    try:
        result = command.execute(run_config)
        outputs = write_outputs(result, run_config, manager)
        exit_code = result.exit_code
    except ConfigError as e:
        logger.error(f"{command.name}: {e}")
        print(f"Configuration error: {e}", file=sys.stderr)
        exit_code = EXIT_CONFIG
    except OSError as e:
        logger.error(f"{command.name}: cannot write output: {e}")
        print(f"Output error: {e}", file=sys.stderr)
        exit_code = EXIT_CONFIG
    except LabError as e:
        logger.error(f"{command.name}: {e}")
        run_logger.log_precondition_failed(command.name, str(e))
        print(f"Error: {e}", file=sys.stderr)
        exit_code = EXIT_PRECONDITION

    run_logger.log_run_finished(command.name, exit_code, time.perf_counter() - started, outputs)
    return exit_code


def main() -> None:
    """Console script entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()

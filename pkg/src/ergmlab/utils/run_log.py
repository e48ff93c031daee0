"""
Run logging for ergmlab.

Provides structured JSON-lines logging of command line runs: parameters,
seeds, outcomes and precondition failures.
"""

import json
import logging
import logging.handlers
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional


class RunLogger:
    """
    Structured run logger.

    Writes one JSON object per event to a rotating file so that every
    stochastic run can be traced back to its seed and knobs.
    """

    def __init__(self, config, include_timestamps: bool = True):
        """
        Initialize run logger.

        Args:
            config: LabConfig instance with run_log_path and enable_run_log
            include_timestamps: Stamp entries with the wall-clock time
        """
        self.config = config
        self.enabled = config.enable_run_log
        self.include_timestamps = include_timestamps

        if self.enabled:
            self._setup_logger()

    def _setup_logger(self):
        """Set up the run logger with file handler and rotation."""
        log_path = Path(self.config.run_log_path)
        self.logger = logging.getLogger(f"ergmlab.runs.{log_path}")
        self.logger.setLevel(logging.INFO)
        self.logger.propagate = False

        log_path.parent.mkdir(parents=True, exist_ok=True)

        if not self.logger.handlers:
            handler = logging.handlers.RotatingFileHandler(
                log_path,
                maxBytes=10 * 1024 * 1024,  # 10MB
                backupCount=5,
                encoding='utf-8'
            )
            handler.setFormatter(logging.Formatter('%(message)s'))
            self.logger.addHandler(handler)

    def _entry(self, event_type: str, **fields) -> Dict[str, Any]:
        entry: Dict[str, Any] = {'event_type': event_type}
        if self.include_timestamps:
            entry['timestamp'] = datetime.now().isoformat()
        entry.update(fields)
        return entry

    def log_run_started(self, subcommand: str, parameters: Dict[str, Any], seed: Optional[int]):
        """
        Log the start of a run.

        Args:
            subcommand: Name of the executed subcommand
            parameters: Parsed arguments (stringified when not JSON-safe)
            seed: Seed in effect for the run, if stochastic
        """
        if not self.enabled:
            return
        entry = self._entry(
            'run_started',
            subcommand=subcommand,
            parameters={k: v if isinstance(v, (int, float, str, bool, type(None), list)) else str(v)
                        for k, v in parameters.items()},
            seed=seed,
        )
        self.logger.info(json.dumps(entry))

    def log_run_finished(
        self,
        subcommand: str,
        exit_code: int,
        duration: float,
        outputs: Optional[List[str]] = None
    ):
        """
        Log the outcome of a run.

        Args:
            subcommand: Name of the executed subcommand
            exit_code: Process exit code
            duration: Wall-clock duration in seconds
            outputs: Files written by the run
        """
        if not self.enabled:
            return
        entry = self._entry(
            'run_finished',
            subcommand=subcommand,
            exit_code=exit_code,
            duration=duration,
            outputs=outputs or [],
        )
        self.logger.info(json.dumps(entry))

    def log_precondition_failed(self, subcommand: str, error: str):
        """Log a module precondition violation."""
        if not self.enabled:
            return
        entry = self._entry('precondition_failed', subcommand=subcommand, error=error)
        self.logger.warning(json.dumps(entry))

    def get_recent_runs(self, limit: int = 100) -> List[Dict]:
        """
        Retrieve recent run log entries.

        Args:
            limit: Maximum number of entries to return

        Returns:
            List of log entry dictionaries
        """
        if not self.enabled:
            return []

        log_path = Path(self.config.run_log_path)
        if not log_path.exists():
            return []

        entries = []
        with open(log_path, 'r', encoding='utf-8') as f:
            for line in f.readlines()[-limit:]:
                try:
                    entries.append(json.loads(line.strip()))
                except json.JSONDecodeError:
                    continue
        return entries

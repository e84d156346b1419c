"""
Metrics Logger module for RANK FLOW fuzz runs.

Records per-contract check counts and failures, and produces the final
FuzzReport (optionally written as JSON).
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional

from src.config_loader import FuzzConfig
from src.models import FuzzFailure, FuzzReport

logger = logging.getLogger(__name__)


class FuzzMetricsLogger:
    """
    Tallies fuzz contract checks.

    Trials report through record_trial (or log_check / log_failure one at a
    time); finalize sorts the failures by trial index and contract name and
    builds the report.
    """

    def __init__(self, output_path: Optional[str] = None):
        """
        Initialize the metrics logger.

        Args:
            output_path: JSON file written by finalize (None to skip writing)
        """
        self.output_path = output_path

        self._contract_checks: Dict[str, int] = {}
        self._contract_failures: Dict[str, int] = {}
        self._failures: List[FuzzFailure] = []
        self._trials_run = 0

    def log_check(self, contract: str, count: int = 1) -> None:
        """
        Count checks of a contract.

        Args:
            contract: Contract name
            count: Number of checks performed
        """
        self._contract_checks[contract] = self._contract_checks.get(contract, 0) + count

    def log_failure(self, failure: FuzzFailure) -> None:
        """
        Record a failed contract.

        Args:
            failure: Failure with the inputs that reproduce it
        """
        self._failures.append(failure)
        self._contract_failures[failure.contract] = self._contract_failures.get(failure.contract, 0) + 1

    def record_trial(self, checks: Dict[str, int], failures: List[FuzzFailure]) -> None:
        """Fold the results of one finished trial."""
        self._trials_run += 1
        for contract, count in checks.items():
            self.log_check(contract, count)
        for failure in failures:
            self.log_failure(failure)

    def summary(self) -> Dict:
        return {
            'trials_run': self._trials_run,
            'total_checks': sum(self._contract_checks.values()),
            'total_failures': len(self._failures),
            'failures_per_contract': dict(sorted(self._contract_failures.items())),
        }

    def finalize(self, config: FuzzConfig, elapsed: float) -> FuzzReport:
        """
        Build the report and write it when an output path was given.

        Args:
            config: Configuration of the run
            elapsed: Wall-clock duration in seconds

        Returns:
            FuzzReport with sorted failures
        """
        failures = sorted(self._failures, key=lambda f: (f.trial_index, f.contract))
        report = FuzzReport(
            config=config,
            trials_run=self._trials_run,
            failures=failures,
            elapsed=elapsed,
            contract_checks=dict(sorted(self._contract_checks.items())),
        )

        if self.output_path:
            output_path = Path(self.output_path)
            output_path.parent.mkdir(parents=True, exist_ok=True)
            output_path.write_text(report.to_document().model_dump_json(indent=2))
            logger.info(f"fuzz report written to {output_path}")

        return report

"""
Experiment Service - runs one configured experiment end to end
Resolves the handler, writes the trial CSV and JSON summary, and maps failures to exit codes
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from hyperlab.hyperlab.config import ExperimentConfig
from hyperlab.hyperlab.exceptions import ConfigError, HyperlabError, InvariantViolation, throw
from hyperlab.hyperlab.utils import get_attr
from hyperlab.hyperlab.utils.records import write_summary_json, write_trials_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED_CHECK = InvariantViolation.exit_code


@dataclass
class ExperimentResult:
    success: bool
    experiment: str
    exit_code: int = EXIT_OK
    csv_path: Path | None = None
    json_path: Path | None = None
    config_hash: str | None = None
    lines: list[str] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    error_message: str | None = None


def get_handler(experiment: str):
    """Get the handler registered for an experiment"""
    from hyperlab.hooks import experiment_handlers

    if experiment not in experiment_handlers:
        throw(f"No handler registered for experiment: {experiment}", ConfigError)

    return get_attr(experiment_handlers[experiment])


class ExperimentService:
    """Service for running experiments and writing their reports"""

    @staticmethod
    def run(config: ExperimentConfig) -> ExperimentResult:
        """
        Run an experiment and write <out>/<experiment>.csv and <out>/<experiment>.json

        Args:
            config: Validated experiment configuration

        Returns:
            ExperimentResult with exit code 0 when every check passed, 3 when a check failed
            or an invariant broke, 2 for invalid parameters
        """
        config_hash = config.config_hash()
        try:
            handler = get_handler(config.experiment)
            logger.info(f"Running experiment {config.experiment} (config {config_hash[:12]})")
            report = handler(config)

            out = Path(config.out)
            csv_path = write_trials_csv(out / f"{config.experiment}.csv", report.rows)
            summary = {"passed": report.passed, **report.summary}
            json_path = write_summary_json(
                out / f"{config.experiment}.json", summary, config_hash, config.result_fields()
            )

            if not report.passed:
                logger.error(f"Experiment {config.experiment} failed a check")

            return ExperimentResult(
                success=report.passed,
                experiment=config.experiment,
                exit_code=EXIT_OK if report.passed else EXIT_FAILED_CHECK,
                csv_path=csv_path,
                json_path=json_path,
                config_hash=config_hash,
                lines=report.lines,
                summary=summary,
                error_message=None if report.passed else "One or more checks failed",
            )

        except HyperlabError as e:
            logger.error(f"Experiment {config.experiment} stopped: {type(e).__name__}: {e}")
            return ExperimentResult(
                success=False,
                experiment=config.experiment,
                exit_code=e.exit_code,
                config_hash=config_hash,
                error_message=str(e),
            )

        except OSError as e:
            logger.error(f"Could not write reports for {config.experiment}: {e}")
            return ExperimentResult(
                success=False,
                experiment=config.experiment,
                exit_code=EXIT_FAILED_CHECK,
                config_hash=config_hash,
                error_message=f"Could not write reports: {e}",
            )

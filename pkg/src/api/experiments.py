"""run command handler."""

import logging
import sys
from typing import Optional

from models.experiment import SweepStatus
from services.experiment_service import ExperimentService
from utils.config_validation import load_config
from utils.errors import ConfigInvalidError
from utils.logging_config import configure_logging

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG_INVALID = 2


def run_experiment_handler(config_path: str, out_dir: Optional[str] = None, jobs: Optional[int] = None) -> int:
    """
    Run every sweep of a config file and write its artefacts.

    Args:
        config_path: Path to the config JSON document
        out_dir: Output directory, overrides the config's outputs field
        jobs: Number of sweeps run concurrently

    Returns:
        0 if every registered check passes, 1 otherwise, 2 for an invalid config
    """
    run_id = configure_logging()
    try:
        config = load_config(config_path)
        report = ExperimentService().run(config, out_dir=out_dir, jobs=jobs, run_id=run_id)
    except ConfigInvalidError as e:
        logger.error(f"Config rejected: {e}")
        print(str(e), file=sys.stderr)
        return EXIT_CONFIG_INVALID

    failed = [sweep.sweep_id for sweep in report.sweeps if sweep.status != SweepStatus.PASS]
    if failed:
        logger.warning(f"Sweeps not passing: {', '.join(failed)}")
        return EXIT_FAIL
    logger.info("All registered checks passed")
    return EXIT_PASS

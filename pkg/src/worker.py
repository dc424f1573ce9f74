"""
Sweep worker: runs planned sweep jobs concurrently with per-job error capture.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional

from models.experiment import ExperimentContext, SweepJob, SweepReport, SweepStatus
from services import check_registry
from utils.errors import LabError

logger = logging.getLogger(__name__)

SweepRunner = Callable[[SweepJob, ExperimentContext], SweepReport]


def process_sweep_job(runner: SweepRunner, job: SweepJob, context: ExperimentContext) -> SweepReport:
    """
    Run one sweep and evaluate its registered checks.

    Args:
        runner: Callable producing the sweep table
        job: Planned sweep
        context: Shared read-only inputs

    Returns:
        Sweep report with PASS, FAIL or FAILED status
    """
    logger.info(f"Starting sweep {job.sweep_id}")
    try:
        report = runner(job, context)
    except LabError as e:
        logger.error(f"Sweep {job.sweep_id} failed: {e}")
        return SweepReport(sweep_id=job.sweep_id, kind=job.kind, r=job.r, status=SweepStatus.FAILED, error_message=str(e))
    except Exception as e:
        logger.exception(f"Unexpected error in sweep {job.sweep_id}")
        return SweepReport(
            sweep_id=job.sweep_id,
            kind=job.kind,
            r=job.r,
            status=SweepStatus.FAILED,
            error_message=f"{type(e).__name__}: {e}",
        )

    report.verdicts = check_registry.evaluate(job.kind, report.rows, report.meta, context.config.tolerances)
    report.status = SweepStatus.PASS if all(v.passed for v in report.verdicts) else SweepStatus.FAIL
    logger.info(f"Sweep {job.sweep_id} finished with status {report.status.value}")
    return report


def run_sweep_jobs(
    runner: SweepRunner,
    jobs: List[SweepJob],
    context: ExperimentContext,
    max_workers: Optional[int] = None,
) -> List[SweepReport]:
    """
    Run independent sweeps concurrently; results keep the planned order.
    """
    if not jobs:
        return []
    with ThreadPoolExecutor(max_workers=max_workers or 1) as executor:
        return list(executor.map(lambda job: process_sweep_job(runner, job, context), jobs))

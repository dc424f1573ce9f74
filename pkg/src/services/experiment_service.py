"""Experiment service: plans and runs configured sweeps and assembles the run report."""

import logging
from pathlib import Path
from typing import List, Optional, Union

from models.experiment import (
    ExperimentConfig,
    ExperimentContext,
    RunReport,
    SweepJob,
    SweepKind,
    SweepReport,
)
from models.minimax import LawsonOptions
from services.christoffel_service import ChristoffelService
from services.geometry_service import GeometryService
from services.lawson_service import LawsonService
from services.measure_service import MeasureService
from services.report_service import ReportService
from utils.config_validation import resolve_geometry
from utils.errors import ConfigInvalidError, MeasureError
from worker import run_sweep_jobs

logger = logging.getLogger(__name__)

WIDOM_COLUMNS = ["n", "lambda", "widom_r", "lower_bound", "gap", "h_r_error", "level_curve_error"]
RESIDUAL_COLUMNS = [
    "n", "t_value", "widom_inf", "entropy", "dual_widom", "gap_rel",
    "extreme_points", "extreme_min_ratio", "level_curve_error", "stalled",
]
OPM_COLUMNS = ["n", "ks_distance", "gap_rel", "dual_widom"]
AHLFORS_COLUMNS = ["n", "A_n", "scaled_A_n", "limit_value", "rel_error", "gap_rel"]
CONTINUITY_COLUMNS = ["k", "zeta_re", "zeta_im", "widom", "deviation"]


class ExperimentService:
    """Service for configuration-driven experiment runs."""

    def __init__(self, geometry_service: Optional[GeometryService] = None):
        """Initialize experiment service."""
        self.geometry_service = geometry_service or GeometryService()

    def prepare(self, config: ExperimentConfig) -> ExperimentContext:
        """
        Resolve geometry, grid and measure for a config.

        Raises:
            ConfigInvalidError: Naming the offending field
        """
        exterior_map, nm = resolve_geometry(config, self.geometry_service)
        grid = self.geometry_service.build_grid(exterior_map, config.grid_M, n_max=config.n_max)
        try:
            measure = MeasureService(self.geometry_service).build_measure(nm, grid, config.density, config.atoms)
        except MeasureError as e:
            raise ConfigInvalidError("atoms", str(e))
        return ExperimentContext(config=config, exterior_map=exterior_map, nm=nm, grid=grid, measure=measure)

    def plan(self, config: ExperimentConfig) -> List[SweepJob]:
        """One job per requested sweep; Widom sweeps expand over r_list."""
        jobs = []
        for kind in dict.fromkeys(config.sweeps):
            if kind == SweepKind.WIDOM:
                jobs.extend(SweepJob(sweep_id=f"widom_r{r:g}", kind=kind, r=r) for r in config.r_list)
            elif kind == SweepKind.CONTINUITY:
                jobs.append(SweepJob(sweep_id="continuity", kind=kind, r=config.r_list[0]))
            else:
                jobs.append(SweepJob(sweep_id=kind.value, kind=kind))
        return jobs

    def run_sweep(self, job: SweepJob, context: ExperimentContext) -> SweepReport:
        """Produce the table for one sweep; solver errors propagate to the worker."""
        config = context.config
        christoffel_service = ChristoffelService(self.geometry_service, seed=config.seed)
        lawson_service = LawsonService(
            self.geometry_service,
            christoffel_service.measure_service,
            christoffel_service.szego_service,
            christoffel_service,
        )
        opts = LawsonOptions(tol=config.tolerances.lawson_gap)
        nm, grid = context.nm, context.grid
        report = SweepReport(sweep_id=job.sweep_id, kind=job.kind, r=job.r)

        if job.kind == SweepKind.WIDOM:
            rows = christoffel_service.widom_sweep(nm, context.measure, job.r, config.degrees)
            S = christoffel_service.measure_service.entropy(nm, grid, config.density)
            report.columns = WIDOM_COLUMNS
            report.rows = [row.to_csv_row() for row in rows]
            report.meta = {"S": S, "monic": nm.is_infinite, "r": job.r}
        elif job.kind in (SweepKind.RESIDUAL, SweepKind.OPM):
            atoms = config.atoms if config.weight.is_point_evaluable else []
            if job.kind == SweepKind.RESIDUAL:
                rows = lawson_service.residual_widom_sweep(nm, grid, config.weight, config.degrees, atoms, opts)
                report.columns = RESIDUAL_COLUMNS
            else:
                rows = lawson_service.opm_trace(
                    nm, grid, config.weight, config.degrees, atoms, tol=config.tolerances.opm_gap
                )
                report.columns = OPM_COLUMNS
            report.rows = rows
            report.meta = {"S": rows[0]["entropy"] if rows else 0.0}
        elif job.kind == SweepKind.AHLFORS:
            report.columns = AHLFORS_COLUMNS
            report.rows = lawson_service.ahlfors_sweep(nm, grid, config.degrees, opts)
            report.meta = {"limit": lawson_service.ahlfors_limit_closed_form(nm).limit_value}
        elif job.kind == SweepKind.CONTINUITY:
            n = config.degrees[0]
            path = ChristoffelService.default_path(config.z0, config.continuity_steps)
            rows = christoffel_service.widom_continuity_probe(
                context.exterior_map, context.measure, job.r, n, config.z0, path
            )
            report.columns = CONTINUITY_COLUMNS
            report.rows = [row.to_csv_row() for row in rows]
            report.meta = {"n": n, "reference": rows[0].widom}
        return report

    def run(
        self,
        config: ExperimentConfig,
        out_dir: Optional[Union[str, Path]] = None,
        jobs: Optional[int] = None,
        run_id: Optional[str] = None,
    ) -> RunReport:
        """
        Execute every requested sweep, write one CSV per sweep and report.json.

        Raises:
            ConfigInvalidError: If the config fails semantic validation
        """
        context = self.prepare(config)
        planned = self.plan(config)
        logger.info(f"Running experiment {config.name} with {len(planned)} sweeps")

        sweeps = run_sweep_jobs(self.run_sweep, planned, context, max_workers=jobs)

        reports = ReportService(out_dir or config.outputs)
        for sweep in sweeps:
            reports.write_sweep(sweep)
        report = RunReport(
            config=config.to_report_dict(),
            sweeps=sweeps,
            versions=reports.package_versions(),
            seed=config.seed,
        )
        if run_id:
            report.run_id = run_id
        reports.write_report(report)
        return report

"""Report service: sweep CSV tables and the JSON run report."""

import csv
import json
import logging
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from models.experiment import RunReport, SweepReport

logger = logging.getLogger(__name__)

VERSIONED_PACKAGES = ("numpy", "scipy", "pydantic")


def format_value(value: Any) -> str:
    """17-significant-digit floats, lowercase booleans, empty string for missing values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


class ReportService:
    """Service for writing run artefacts."""

    def __init__(self, out_dir: Union[str, Path]):
        """Initialize report service for an output directory."""
        self.out_dir = Path(out_dir)

    def write_csv(self, name: str, columns: List[str], rows: Iterable[Dict[str, Any]]) -> Path:
        """Write a table with a fixed column order."""
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / f"{name}.csv"
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([format_value(row.get(column)) for column in columns])
        return path

    def write_sweep(self, sweep: SweepReport) -> Optional[Path]:
        if not sweep.rows:
            return None
        path = self.write_csv(sweep.sweep_id, sweep.columns, sweep.rows)
        sweep.csv_path = str(path)
        return path

    def write_report(self, report: RunReport) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / "report.json"
        path.write_text(json.dumps(report.to_report_dict(), indent=2, sort_keys=True))
        logger.info(f"Wrote report {path} (all_passed={report.all_passed})")
        return path

    @staticmethod
    def package_versions() -> Dict[str, str]:
        versions = {}
        for package in VERSIONED_PACKAGES:
            try:
                versions[package] = metadata.version(package)
            except metadata.PackageNotFoundError:
                versions[package] = "unknown"
        return versions

"""Tests for the report service."""

import json

import numpy as np

from models.experiment import CheckVerdict, RunReport, SweepKind, SweepReport, SweepStatus
from services.report_service import ReportService, format_value


class TestFormatValue:
    """Test cases for CSV cell formatting."""

    def test_floats_use_17_significant_digits(self):
        """Floats round-trip exactly."""
        assert format_value(0.1) == "0.10000000000000001"
        assert float(format_value(1 / 3)) == 1 / 3

    def test_numpy_floats(self):
        """numpy float64 formats like float."""
        assert format_value(np.float64(0.5)) == "0.5"

    def test_booleans_and_missing(self):
        """Booleans are lowercase and None is empty."""
        assert format_value(True) == "true"
        assert format_value(False) == "false"
        assert format_value(None) == ""

    def test_integers(self):
        """Integers keep their decimal form."""
        assert format_value(12) == "12"


class TestReportService:
    """Test cases for writing run artefacts."""

    def sweep(self, rows):
        return SweepReport(
            sweep_id="widom_r2",
            kind=SweepKind.WIDOM,
            r=2.0,
            status=SweepStatus.PASS,
            columns=["n", "lambda", "gap"],
            rows=rows,
            verdicts=[CheckVerdict(check_id="widom_limit", theorem="limit", passed=True)],
        )

    def test_write_csv_column_order(self, tmp_path):
        """Columns follow the declared order, missing values are empty."""
        service = ReportService(tmp_path / "out")

        path = service.write_csv("table", ["n", "x", "flag"], [{"flag": True, "n": 1, "x": 0.25}, {"n": 2}])

        assert path.read_text() == "n,x,flag\n1,0.25,true\n2,,\n"

    def test_write_sweep_records_path(self, tmp_path):
        """The CSV path is stored on the sweep."""
        service = ReportService(tmp_path)
        sweep = self.sweep([{"n": 2, "lambda": 0.5, "gap": 0.0}])

        path = service.write_sweep(sweep)

        assert path == tmp_path / "widom_r2.csv"
        assert sweep.csv_path == str(path)

    def test_empty_sweep_writes_nothing(self, tmp_path):
        """Failed sweeps without rows produce no CSV."""
        service = ReportService(tmp_path)

        assert service.write_sweep(self.sweep([])) is None
        assert not list(tmp_path.iterdir())

    def test_write_report(self, tmp_path):
        """report.json echoes the config, verdicts and versions without the rows."""
        service = ReportService(tmp_path)
        report = RunReport(
            run_id="run-1",
            config={"name": "demo"},
            sweeps=[self.sweep([{"n": 2, "lambda": 0.5, "gap": 0.0}])],
            versions={"numpy": "1.26.0"},
            seed=3,
        )

        data = json.loads(service.write_report(report).read_text())

        assert data["run_id"] == "run-1"
        assert data["all_passed"] is True
        assert data["seed"] == 3
        assert data["config"] == {"name": "demo"}
        assert data["sweeps"][0]["verdicts"][0]["check_id"] == "widom_limit"
        assert "rows" not in data["sweeps"][0]

    def test_package_versions(self):
        """Every versioned package is reported."""
        versions = ReportService.package_versions()

        assert set(versions) == {"numpy", "scipy", "pydantic"}
        assert versions["numpy"] != "unknown"

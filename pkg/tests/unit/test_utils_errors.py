"""Tests for the exception hierarchy."""

import pytest

from utils.errors import (
    AhlforsPointError,
    AtomOutsideRegionError,
    ConfigInvalidError,
    DegreeTooLargeForGridError,
    GeometryError,
    IrlsNoConvergenceError,
    LabError,
    MeasureError,
    MinimaxError,
    NoConvergenceError,
    NonSzegoError,
    RankDeficientError,
    StalledGapError,
)


class TestErrors:
    """Test cases for error types."""

    @pytest.mark.parametrize(
        "error_type, parent",
        [
            (NoConvergenceError, GeometryError),
            (AtomOutsideRegionError, MeasureError),
            (NonSzegoError, LabError),
            (DegreeTooLargeForGridError, LabError),
            (RankDeficientError, LabError),
            (StalledGapError, MinimaxError),
            (AhlforsPointError, MinimaxError),
            (ConfigInvalidError, LabError),
        ],
    )
    def test_hierarchy(self, error_type, parent):
        """Every error derives from LabError through its layer."""
        assert issubclass(error_type, parent)

    def test_config_error_names_the_field(self):
        """ConfigInvalidError keeps the field and formats the message."""
        error = ConfigInvalidError("grid_M", "must be a power of two")

        assert error.field == "grid_M"
        assert str(error) == "Invalid config field 'grid_M': must be a power of two"

    def test_best_iterate_is_attached(self):
        """Solver errors carry the best iterate."""
        assert IrlsNoConvergenceError("cap", best="x").best == "x"
        assert StalledGapError("stall").best is None

    def test_newton_residual(self):
        """NoConvergenceError records the final residual."""
        assert NoConvergenceError("stalled", residual=1e-3).residual == 1e-3

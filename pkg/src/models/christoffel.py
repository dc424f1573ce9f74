"""Result types for the L^r Christoffel solvers."""

from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from models.polynomial import PolynomialC


class SolveOutcome(str, Enum):
    """How a Christoffel solve terminated."""
    CONVERGED = "converged"
    EXACTLY_ZERO = "exactly_zero"
    ACCEPTED_LOOSE = "accepted_loose"


class SolverReport(BaseModel):
    """Solver diagnostics attached to every solution."""

    iterations: int = Field(default=0, ge=0, description="IRLS iterations (0 for direct solves)")
    final_residual: float = Field(default=0.0, description="KKT residual or final relative objective change")
    multi_start_best: Optional[int] = Field(default=None, description="Index of the winning start for r < 1")
    nonconvex: bool = Field(default=False, description="True when r < 1")
    outcome: SolveOutcome = Field(default=SolveOutcome.CONVERGED, description="Termination outcome")
    recomputed_error: float = Field(default=0.0, description="Relative gap between lambda and the recomputed integral")


class ChristoffelSolution(BaseModel):
    """Minimizing polynomial and extremal value lambda_n(mu, z0, r)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    poly: PolynomialC = Field(..., description="Minimizing polynomial")
    lambda_value: float = Field(..., ge=0, description="Extremal value lambda_n")
    widom: float = Field(..., ge=0, description="W_{r,n} = C^-n * lambda^(1/r)")
    r: float = Field(..., gt=0, description="Exponent")
    n: int = Field(..., ge=0, description="Degree")
    solver_report: SolverReport = Field(default_factory=SolverReport, description="Diagnostics")

    @property
    def widom_r(self) -> float:
        return self.widom ** self.r

    def to_report_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "r": self.r,
            "lambda": self.lambda_value,
            "widom": self.widom,
            "poly": self.poly.to_report_dict(),
            "solver_report": self.solver_report.model_dump(mode="json"),
        }


class WidomRow(BaseModel):
    """One row of a Widom sweep table."""

    n: int
    lambda_value: float
    widom_r: float
    lower_bound: float
    gap: float
    h_r_error: Optional[float] = None
    level_curve_error: Optional[float] = None

    def to_csv_row(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "lambda": self.lambda_value,
            "widom_r": self.widom_r,
            "lower_bound": self.lower_bound,
            "gap": self.gap,
            "h_r_error": self.h_r_error,
            "level_curve_error": self.level_curve_error,
        }


class ContinuityRow(BaseModel):
    """One point of a Widom continuity probe."""

    k: int
    zeta: Any
    widom: float
    deviation: float

    def to_csv_row(self) -> Dict[str, Any]:
        finite = not isinstance(self.zeta, str)
        return {
            "k": self.k,
            "zeta_re": complex(self.zeta).real if finite else float("inf"),
            "zeta_im": complex(self.zeta).imag if finite else 0.0,
            "widom": self.widom,
            "deviation": self.deviation,
        }

"""Lawson iteration state and weighted Chebyshev/residual results."""

from enum import Enum
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from models.geometry import complex_pair
from models.polynomial import PolynomialC


class LawsonInit(str, Enum):
    """Initial candidate measure for the Lawson iteration."""
    UNIFORM = "uniform"
    HARMONIC = "harmonic"


class LawsonOptions(BaseModel):
    """Stopping rules for lawson_solve."""

    tol: Optional[float] = Field(default=None, gt=0, description="Relative duality gap target (LAWSON_GAP_TOL)")
    max_iter: Optional[int] = Field(default=None, gt=0, description="Iteration cap (LAWSON_MAX_ITER)")
    init: LawsonInit = Field(default=LawsonInit.UNIFORM, description="Initial candidate measure")
    strict: bool = Field(default=False, description="Raise StalledGapError instead of flagging")


class LawsonState(BaseModel):
    """Snapshot of a Lawson iterate."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nu: np.ndarray = Field(..., description="Probability vector over grid nodes then atoms")
    poly: PolynomialC = Field(..., description="L2 best response for rho^2 d(nu)")
    dual: float = Field(..., ge=0, description="lambda_n(rho^2 d(nu), z0, 2)^(1/2)")
    primal: float = Field(..., ge=0, description="max_j rho_j |poly(z_j)|")
    iter: int = Field(default=0, ge=0, description="Iteration count")

    @property
    def gap(self) -> float:
        return self.primal - self.dual

    @property
    def gap_rel(self) -> float:
        return self.gap / self.primal if self.primal > 0 else 0.0


class ResidualSolution(BaseModel):
    """Weighted Chebyshev (MONIC) or residual (POINT) polynomial with certificates."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    poly: PolynomialC = Field(..., description="Extremal polynomial T_n")
    n: int = Field(..., ge=0, description="Degree")
    t_value: float = Field(..., ge=0, description="Primal value on the grid")
    widom_inf: float = Field(..., ge=0, description="C^-n * t")
    opm: np.ndarray = Field(..., description="Candidate optimal prediction measure")
    extreme_points: List[float] = Field(default_factory=list, description="Merged extreme-point angles")
    extreme_values: List[float] = Field(default_factory=list, description="rho|T| at the extreme points")
    gap_rel: float = Field(..., ge=0, description="(primal - dual) / primal")
    dual: float = Field(..., ge=0, description="Best dual lower bound")
    iterations: int = Field(default=0, ge=0, description="Lawson iterations used")
    stalled: bool = Field(default=False, description="True when the gap target was not reached")
    offgrid_inflation: float = Field(default=1.0, description="Grid-to-sup inflation estimate")
    history: List[Dict[str, float]] = Field(default_factory=list, description="Per-iterate dual/primal")
    state: Optional[LawsonState] = Field(default=None, description="Best dual measure paired with the best primal polynomial")

    def to_report_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "t_value": self.t_value,
            "widom_inf": self.widom_inf,
            "gap_rel": self.gap_rel,
            "dual": self.dual,
            "iterations": self.iterations,
            "stalled": self.stalled,
            "offgrid_inflation": self.offgrid_inflation,
            "extreme_points": self.extreme_points,
            "opm": [float(v) for v in self.opm],
            "poly": self.poly.to_report_dict(),
        }


class AhlforsResult(BaseModel):
    """Ahlfors value A_n(z0) and Q_n(z) = (z - z0) T_{n-1}(z)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(..., ge=1, description="Degree of Q_n")
    z0: complex = Field(..., description="Finite normalization point")
    A_value: float = Field(..., ge=0, description="A_n(z0)")
    residual: ResidualSolution = Field(..., description="Weighted residual solve at degree n - 1")

    def q_value(self, z: Any) -> Any:
        return (np.asarray(z, dtype=complex) - self.z0) * self.residual.poly.evaluate(z)

    @property
    def q_derivative_at_z0(self) -> complex:
        return complex(self.residual.poly.evaluate(self.z0))

    def to_report_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "z0": complex_pair(self.z0), "A_value": self.A_value}


class AhlforsLimit(BaseModel):
    """Closed-form Ahlfors limit quantities at z0."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    limit_value: float = Field(..., description="|Phi(z0)|^2 - 1")
    entropy_value: float = Field(..., description="(|Phi(z0)|^2 - 1) / |Phi'(z0) Phi(z0)|")
    scale: float = Field(..., description="|Phi'(z0) Phi(z0)|")
    derivative_modulus: float = Field(..., gt=0, description="|Phi'(z0)|")
    phi_modulus: float = Field(..., ge=1, description="|Phi(z0)|")
    limit_function: Callable[[Any], Any] = Field(..., description="Limit of the rescaled Ahlfors polynomials")

    def scaled(self, n: int, A_value: float) -> float:
        """|Phi'(z0)| |Phi(z0)|^n A_n, which tends to limit_value."""
        return self.derivative_modulus * self.phi_modulus ** n * A_value

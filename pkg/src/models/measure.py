"""Density specifications and discretized boundary measures."""

from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.geometry import BoundaryGrid, ComplexValue, ExteriorMap, complex_pair
from utils.errors import DensityError


class DensityKind(str, Enum):
    """Density preset enumeration."""
    CONSTANT = "constant"
    ABS_LINEAR = "abs_linear"
    ABS_LINEAR_SQUARED = "abs_linear_squared"
    EXP_TRIG = "exp_trig"
    VANISHING = "vanishing"
    TABLE = "table"
    ARC_INDICATOR = "arc_indicator"


# Kinds with a closed form at arbitrary points of the plane.
POINT_EVALUABLE = {
    DensityKind.CONSTANT,
    DensityKind.ABS_LINEAR,
    DensityKind.ABS_LINEAR_SQUARED,
    DensityKind.VANISHING,
}

DENSITY_PARAMETERS: Dict[str, Dict[str, str]] = {
    "constant": {"c": "positive real, f = c"},
    "abs_linear": {"a": "complex, f(z) = |z - a|"},
    "abs_linear_squared": {"a": "complex, f(z) = |z - a|^2"},
    "exp_trig": {
        "cos": "list of reals a_1..a_K",
        "sin": "list of reals b_1..b_K",
        "f": "exp(sum a_k cos(k theta) + b_k sin(k theta)) at Psi(e^{i theta})",
    },
    "vanishing": {"angle": "real, zero at a = Psi(e^{i angle})", "p": "positive real, f(z) = |z - a|^p"},
    "table": {"values": "list of M nonnegative reals, one per grid node"},
    "arc_indicator": {
        "start": "real angle", "end": "real angle",
        "inside": "value on [start, end]", "outside": "value elsewhere",
    },
}


class DensitySpec(BaseModel):
    """Boundary density f (or weight rho) given by kind and parameters."""

    model_config = ConfigDict(frozen=True)

    kind: DensityKind = Field(..., description="Density preset")
    c: float = Field(default=1.0, description="Constant value")
    a: ComplexValue = Field(default=0j, description="Center for abs_linear kinds")
    p: float = Field(default=1.0, description="Exponent for vanishing")
    angle: float = Field(default=0.0, description="Boundary angle of the zero for vanishing")
    cos: List[float] = Field(default_factory=list, description="Cosine coefficients for exp_trig")
    sin: List[float] = Field(default_factory=list, description="Sine coefficients for exp_trig")
    values: List[float] = Field(default_factory=list, description="Tabulated node values")
    start: float = Field(default=0.0, description="Arc start angle")
    end: float = Field(default=0.0, description="Arc end angle")
    inside: float = Field(default=0.0, description="Indicator value on the arc")
    outside: float = Field(default=1.0, description="Indicator value off the arc")
    scale: float = Field(default=1.0, gt=0, description="Positive multiplier applied to f")

    @model_validator(mode="after")
    def _check_parameters(self) -> "DensitySpec":
        if self.kind == DensityKind.CONSTANT and self.c < 0:
            raise ValueError("constant density must be nonnegative")
        if self.kind == DensityKind.VANISHING and self.p <= 0:
            raise ValueError("vanishing density needs p > 0")
        if self.kind == DensityKind.TABLE and any(v < 0 for v in self.values):
            raise ValueError("table density must be nonnegative")
        if self.kind == DensityKind.ARC_INDICATOR and min(self.inside, self.outside) < 0:
            raise ValueError("arc indicator values must be nonnegative")
        return self

    @property
    def is_point_evaluable(self) -> bool:
        return self.kind in POINT_EVALUABLE

    def evaluate(self, grid: BoundaryGrid) -> np.ndarray:
        """
        Evaluate f at the grid nodes.

        Raises:
            DensityError: If a table does not match the grid size
        """
        thetas = grid.thetas
        if self.kind == DensityKind.EXP_TRIG:
            exponent = np.zeros(grid.M)
            for k, coefficient in enumerate(self.cos, start=1):
                exponent += coefficient * np.cos(k * thetas)
            for k, coefficient in enumerate(self.sin, start=1):
                exponent += coefficient * np.sin(k * thetas)
            return self.scale * np.exp(exponent)
        if self.kind == DensityKind.TABLE:
            if len(self.values) != grid.M:
                raise DensityError(f"table has {len(self.values)} values for a grid of {grid.M}")
            return self.scale * np.asarray(self.values, dtype=float)
        if self.kind == DensityKind.ARC_INDICATOR:
            span = np.mod(self.end - self.start, 2 * np.pi)
            on_arc = np.mod(thetas - self.start, 2 * np.pi) <= span
            return self.scale * np.where(on_arc, self.inside, self.outside)
        return self.evaluate_points(grid.nodes, grid.base)

    def evaluate_points(self, z: Any, exterior_map: Optional[ExteriorMap] = None) -> np.ndarray:
        """
        Evaluate f at arbitrary points.

        Raises:
            DensityError: For boundary-only kinds
        """
        points = np.asarray(z, dtype=complex)
        if self.kind == DensityKind.CONSTANT:
            return self.scale * np.full(points.shape, self.c)
        if self.kind == DensityKind.ABS_LINEAR:
            return self.scale * np.abs(points - self.a)
        if self.kind == DensityKind.ABS_LINEAR_SQUARED:
            return self.scale * np.abs(points - self.a) ** 2
        if self.kind == DensityKind.VANISHING:
            if exterior_map is None:
                raise DensityError("vanishing density needs the exterior map to place its zero")
            zero = exterior_map.psi(np.exp(1j * self.angle))
            return self.scale * np.abs(points - zero) ** self.p
        raise DensityError(f"{self.kind.value} density is only defined on the boundary grid")

    def to_report_dict(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json")
        data["a"] = complex_pair(self.a)
        return data


class Atom(BaseModel):
    """Point mass of the singular part, located in K."""

    model_config = ConfigDict(frozen=True)

    location: ComplexValue = Field(..., description="Atom location in K")
    mass: float = Field(..., gt=0, description="Atom mass")

    def to_report_dict(self) -> Dict[str, Any]:
        return {"location": complex_pair(self.location), "mass": self.mass}


class DiscretizedMeasure(BaseModel):
    """mu = f d(omega_z0) + sum of atoms, as grid quadrature weights plus point masses."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: BoundaryGrid = Field(..., description="Boundary grid carrying the absolutely continuous part")
    boundary_weights: np.ndarray = Field(..., description="f(z_j) * harmonic weight_j")
    density_values: np.ndarray = Field(..., description="f(z_j)")
    harmonic: np.ndarray = Field(..., description="Harmonic weights of z0 at the nodes")
    atoms: List[Atom] = Field(default_factory=list, description="Singular part")
    on_circle: bool = Field(default=False, description="True for pushforwards to the unit circle")

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.boundary_weights) + sum(atom.mass for atom in self.atoms))

    @property
    def atom_locations(self) -> np.ndarray:
        return np.array([atom.location for atom in self.atoms], dtype=complex)

    @property
    def atom_masses(self) -> np.ndarray:
        return np.array([atom.mass for atom in self.atoms], dtype=float)

    @property
    def support_points(self) -> np.ndarray:
        """Grid nodes followed by atom locations."""
        return np.concatenate([self.grid.nodes, self.atom_locations])

    @property
    def support_weights(self) -> np.ndarray:
        return np.concatenate([self.boundary_weights, self.atom_masses])

    @property
    def positive_support_count(self) -> int:
        return int(np.count_nonzero(self.support_weights > 0))

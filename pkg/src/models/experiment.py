"""Experiment configuration and run report models."""

import uuid
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from models.geometry import (
    BoundaryGrid,
    ExtendedPoint,
    ExteriorMap,
    NormalizedMap,
    complex_pair,
    is_infinite,
)
from models.measure import Atom, DensityKind, DensitySpec, DiscretizedMeasure


class SweepKind(str, Enum):
    """Sweep enumeration."""
    WIDOM = "widom"
    RESIDUAL = "residual"
    AHLFORS = "ahlfors"
    OPM = "opm"
    CONTINUITY = "continuity"


class SweepStatus(str, Enum):
    """Sweep outcome enumeration."""
    PENDING = "pending"
    PASS = "PASS"
    FAIL = "FAIL"
    FAILED = "FAILED"


class GeometryConfig(BaseModel):
    """Geometry preset selection."""

    preset: str = Field(..., description="disk, ellipse or perturbed_circle")
    params: Dict[str, Any] = Field(default_factory=dict, description="Preset parameters")


class Tolerances(BaseModel):
    """Acceptance tolerances used by the registered checks."""

    lawson_gap: float = Field(default=1e-3, gt=0, description="Relative duality gap target")
    sweep_tol: float = Field(default=3e-2, gt=0, description="Relative tolerance of limit checks")
    opm_gap: float = Field(default=1e-9, gt=0, description="Duality gap the OPM trace is solved to")


class ExperimentConfig(BaseModel):
    """One experiment: geometry, normalization point, measure, weight and sweeps."""

    name: str = Field(default="experiment", description="Experiment name")
    geometry: GeometryConfig = Field(..., description="Geometry preset")
    z0: ExtendedPoint = Field(..., description="Normalization point in Omega or 'inf'")
    density: DensitySpec = Field(
        default_factory=lambda: DensitySpec(kind=DensityKind.CONSTANT), description="Density f of mu"
    )
    weight: DensitySpec = Field(
        default_factory=lambda: DensitySpec(kind=DensityKind.CONSTANT), description="Weight rho"
    )
    atoms: List[Atom] = Field(default_factory=list, description="Singular part of mu")
    r_list: List[float] = Field(default_factory=lambda: [2.0], description="Exponents r")
    n_range: List[int] = Field(..., description="[n_min, n_max, step]")
    grid_M: int = Field(..., gt=0, description="Boundary grid size")
    tolerances: Tolerances = Field(default_factory=Tolerances, description="Check tolerances")
    sweeps: List[SweepKind] = Field(default_factory=lambda: [SweepKind.WIDOM], description="Sweeps to run")
    continuity_steps: int = Field(default=4, gt=0, description="Points per continuity path")
    seed: int = Field(default=0, description="Seed for randomized solver starts")
    outputs: str = Field(default="out", description="Output directory")

    @field_validator("r_list")
    @classmethod
    def _positive_exponents(cls, value: List[float]) -> List[float]:
        if not value or any(r <= 0 for r in value):
            raise ValueError("r_list must hold positive exponents")
        return value

    @field_validator("n_range")
    @classmethod
    def _well_formed_range(cls, value: List[int]) -> List[int]:
        if len(value) != 3 or value[0] < 0 or value[1] < value[0] or value[2] < 1:
            raise ValueError("n_range must be [n_min, n_max, step] with 0 <= n_min <= n_max, step >= 1")
        return value

    @property
    def degrees(self) -> List[int]:
        n_min, n_max, step = self.n_range
        return list(range(n_min, n_max + 1, step))

    @property
    def n_max(self) -> int:
        return self.n_range[1]

    def to_report_dict(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json", exclude={"density", "weight", "atoms", "z0"})
        data["z0"] = self.z0 if is_infinite(self.z0) else complex_pair(self.z0)
        data["density"] = self.density.to_report_dict()
        data["weight"] = self.weight.to_report_dict()
        data["atoms"] = [atom.to_report_dict() for atom in self.atoms]
        return data


class CheckVerdict(BaseModel):
    """Outcome of one registered check."""

    check_id: str = Field(..., description="Registered check identifier")
    theorem: str = Field(..., description="Statement the check instantiates")
    passed: bool = Field(..., description="Verdict")
    detail: str = Field(default="", description="Measured quantities")


class SweepReport(BaseModel):
    """One executed sweep."""

    sweep_id: str = Field(..., description="Sweep identifier, e.g. widom_r2")
    kind: SweepKind = Field(..., description="Sweep kind")
    r: Optional[float] = Field(default=None, description="Exponent for Widom sweeps")
    status: SweepStatus = Field(default=SweepStatus.PENDING, description="PASS, FAIL or FAILED")
    columns: List[str] = Field(default_factory=list, description="CSV column order")
    rows: List[Dict[str, Any]] = Field(default_factory=list, description="Table rows")
    meta: Dict[str, Any] = Field(default_factory=dict, description="Sweep-level scalars such as S")
    verdicts: List[CheckVerdict] = Field(default_factory=list, description="Check verdicts")
    csv_path: Optional[str] = Field(default=None, description="Written CSV file")
    error_message: Optional[str] = Field(default=None, description="Error message if the sweep failed")


class RunReport(BaseModel):
    """Machine-readable report of one run."""

    run_id: str = Field(default_factory=lambda: str(uuid.uuid4()), description="Run correlation id")
    config: Dict[str, Any] = Field(..., description="Config echo")
    sweeps: List[SweepReport] = Field(default_factory=list, description="Executed sweeps")
    versions: Dict[str, str] = Field(default_factory=dict, description="Package versions")
    seed: int = Field(default=0, description="Seed in use")
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc), description="Report timestamp")

    @property
    def all_passed(self) -> bool:
        return all(sweep.status == SweepStatus.PASS for sweep in self.sweeps)

    def to_report_dict(self) -> Dict[str, Any]:
        return {
            "run_id": self.run_id,
            "created_at": self.created_at.isoformat(),
            "config": self.config,
            "versions": self.versions,
            "seed": self.seed,
            "all_passed": self.all_passed,
            "sweeps": [
                sweep.model_dump(mode="json", exclude={"rows"}) for sweep in self.sweeps
            ],
        }


class SweepJob(BaseModel):
    """One planned sweep handed to the worker."""

    sweep_id: str = Field(..., description="Sweep identifier")
    kind: SweepKind = Field(..., description="Sweep kind")
    r: Optional[float] = Field(default=None, description="Exponent for Widom sweeps")


class ExperimentContext(BaseModel):
    """Read-only inputs shared by every sweep of a run."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    config: ExperimentConfig = Field(..., description="Validated config")
    exterior_map: ExteriorMap = Field(..., description="Geometry")
    nm: NormalizedMap = Field(..., description="Map normalized at z0")
    grid: BoundaryGrid = Field(..., description="Boundary grid")
    measure: DiscretizedMeasure = Field(..., description="Discretized mu")

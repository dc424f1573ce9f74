"""Jordan-region geometry described by exterior conformal maps."""

from typing import Annotated, Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, model_validator

INF = "inf"

# Boundary samples used to certify injectivity at construction.
CONSTRUCTION_NODES = 256
MIN_DERIVATIVE = 1e-8


def coerce_complex(value: Any) -> Any:
    """Accept [re, im] pairs and numeric strings wherever a complex is expected."""
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str) and value.strip().lower() != INF:
        return complex(value.replace(" ", ""))
    return value


ComplexValue = Annotated[complex, BeforeValidator(coerce_complex)]
ExtendedPoint = Annotated[Union[Literal["inf"], complex], BeforeValidator(coerce_complex)]


def is_infinite(z0: Any) -> bool:
    """True when z0 is the point at infinity."""
    return isinstance(z0, str) and z0.lower() == INF


def complex_pair(z: complex) -> List[float]:
    """Serialise a complex number as [re, im]."""
    return [float(np.real(z)), float(np.imag(z))]


def _laurent(cap: float, c0: complex, tail: List[complex], w: np.ndarray) -> np.ndarray:
    inv = 1.0 / w
    acc = np.zeros_like(w, dtype=complex)
    for coefficient in reversed(tail):
        acc = (acc + coefficient) * inv
    return cap * w + c0 + acc


def _laurent_derivative(cap: float, tail: List[complex], w: np.ndarray) -> np.ndarray:
    inv = 1.0 / w
    acc = np.full_like(w, cap, dtype=complex)
    for k, coefficient in enumerate(tail, start=1):
        acc = acc - k * coefficient * inv ** (k + 1)
    return acc


def _segments_cross(points: np.ndarray) -> bool:
    """Check whether any two non-adjacent edges of a closed polygon intersect."""
    p = points
    q = np.roll(points, -1)
    count = len(points)
    i, j = np.triu_indices(count, k=2)
    keep = ~((i == 0) & (j == count - 1))
    i, j = i[keep], j[keep]

    def orient(a, b, c):
        return np.sign(((b - a) * np.conj(c - a)).imag)

    o1 = orient(p[i], q[i], p[j])
    o2 = orient(p[i], q[i], q[j])
    o3 = orient(p[j], q[j], p[i])
    o4 = orient(p[j], q[j], q[i])
    proper = (o1 * o2 < 0) & (o3 * o4 < 0)
    return bool(np.any(proper))


class ExteriorMap(BaseModel):
    """Exterior conformal map Psi(w) = cap*w + c0 + sum_k tail[k-1] * w**-k on |w| >= 1."""

    model_config = ConfigDict(frozen=True)

    cap: float = Field(..., gt=0, description="Leading Laurent coefficient (logarithmic capacity)")
    c0: ComplexValue = Field(default=0j, description="Constant Laurent term")
    tail: List[ComplexValue] = Field(default_factory=list, description="Coefficients c_1..c_L")
    smoothness_margin: float = Field(default=0.0, description="min |Psi'| on the unit circle")
    name: str = Field(default="custom", description="Preset name the map was built from")

    @model_validator(mode="before")
    @classmethod
    def _certify(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        cap = float(data.get("cap", 0.0))
        if cap <= 0:
            raise ValueError("cap must be positive")
        c0 = coerce_complex(data.get("c0", 0j))
        tail = [coerce_complex(c) for c in data.get("tail", [])]

        thetas = 2 * np.pi * np.arange(CONSTRUCTION_NODES) / CONSTRUCTION_NODES
        w = np.exp(1j * thetas)
        margin = float(np.min(np.abs(_laurent_derivative(cap, tail, w))))
        if margin < MIN_DERIVATIVE:
            raise ValueError(f"|Psi'| vanishes on the unit circle (margin {margin:.3e})")
        if _segments_cross(_laurent(cap, complex(c0), tail, w)):
            raise ValueError("boundary curve is not simple")

        certified = dict(data)
        certified["smoothness_margin"] = margin
        return certified

    @property
    def laurent_order(self) -> int:
        return len(self.tail)

    def psi(self, w: Any) -> Any:
        """Evaluate Psi at points with |w| >= 1 (scalar or array)."""
        arr = np.asarray(w, dtype=complex)
        values = _laurent(self.cap, self.c0, list(self.tail), np.atleast_1d(arr))
        return values.reshape(arr.shape) if arr.ndim else complex(values[0])

    def dpsi(self, w: Any) -> Any:
        """Evaluate Psi' at points with |w| >= 1 (scalar or array)."""
        arr = np.asarray(w, dtype=complex)
        values = _laurent_derivative(self.cap, list(self.tail), np.atleast_1d(arr))
        return values.reshape(arr.shape) if arr.ndim else complex(values[0])

    def faber_vandermonde(self, n: int, z: Any) -> np.ndarray:
        """
        Values of the Faber polynomials F_0..F_n at the points z.

        Uses c*F_{m+1} = (z - c0)F_m - sum_{j=1..m} c_j F_{m-j} - m*c_m, which
        follows from Psi'(w)/(Psi(w) - z) = sum_m F_m(z) w^{-m-1}.

        Returns:
            Array of shape (len(z), n + 1)
        """
        points = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        table = np.empty((points.size, n + 1), dtype=complex)
        table[:, 0] = 1.0
        tail = list(self.tail)
        for m in range(n):
            nxt = (points - self.c0) * table[:, m]
            for j in range(1, min(m, len(tail)) + 1):
                nxt = nxt - tail[j - 1] * table[:, m - j]
            if 1 <= m <= len(tail):
                nxt = nxt - m * tail[m - 1]
            table[:, m + 1] = nxt / self.cap
        return table

    def to_report_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "cap": self.cap,
            "c0": complex_pair(self.c0),
            "tail": [complex_pair(c) for c in self.tail],
            "smoothness_margin": self.smoothness_margin,
        }


class NormalizedMap(BaseModel):
    """Exterior map rotated so that Phi_{z0}(z0) > 0."""

    model_config = ConfigDict(frozen=True)

    base: ExteriorMap = Field(..., description="Underlying exterior map")
    z0: ExtendedPoint = Field(..., description="Normalization point in Omega or 'inf'")
    rotation: complex = Field(default=1 + 0j, description="Unit factor e^{i alpha}")
    w0: float = Field(default=0.0, ge=0.0, lt=1.0, description="1/Phi_{z0}(z0), zero at infinity")
    phi_inf_z0: Optional[complex] = Field(default=None, description="Phi_inf(z0) for finite z0")

    @property
    def is_infinite(self) -> bool:
        return is_infinite(self.z0)

    @property
    def alpha(self) -> float:
        return float(np.angle(self.rotation))

    @property
    def capacity(self) -> float:
        """C(K, z0): 1/|Phi_inf(z0)| for finite z0, the logarithmic capacity at infinity."""
        return self.base.cap if self.is_infinite else self.w0

    def phi(self, w_inf: Any) -> Any:
        """Map Phi_inf values to Phi_{z0} values."""
        return self.rotation * np.asarray(w_inf, dtype=complex)


class BoundaryGrid(BaseModel):
    """Uniform trapezoid grid on the boundary, parametrised through Psi(e^{i theta})."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    base: ExteriorMap = Field(..., description="Map the nodes were generated from")
    M: int = Field(..., gt=0, description="Node count (power of two)")
    offset: float = Field(default=0.0, description="Angle of the first node")
    thetas: np.ndarray = Field(..., description="Node angles offset + 2*pi*j/M")
    nodes: np.ndarray = Field(..., description="Boundary points Psi(e^{i theta_j})")
    jacobian: np.ndarray = Field(..., description="|Psi'(e^{i theta_j})| per node")

    @property
    def circle_points(self) -> np.ndarray:
        return np.exp(1j * self.thetas)

    @property
    def spacing(self) -> float:
        return 2 * np.pi / self.M

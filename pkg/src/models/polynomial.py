"""Polynomials in the monomial or Faber basis with their normalization."""

from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from models.geometry import ExteriorMap, ExtendedPoint, complex_pair, is_infinite


class Basis(str, Enum):
    """Coefficient basis."""
    MONOMIAL = "monomial"
    FABER = "faber"


class Normalization(str, Enum):
    """Normalization functional a polynomial satisfies."""
    POINT = "point"
    MONIC = "monic"
    NONE = "none"


class PolynomialC(BaseModel):
    """Complex polynomial with ascending coefficients in a declared basis."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeffs: np.ndarray = Field(..., description="Ascending coefficients")
    basis: Basis = Field(default=Basis.MONOMIAL, description="Coefficient basis")
    normalization: Normalization = Field(default=Normalization.NONE, description="Normalization functional")
    norm_point: Optional[ExtendedPoint] = Field(default=None, description="z0 for POINT normalization")
    basis_map: Optional[ExteriorMap] = Field(default=None, description="Exterior map defining the Faber basis")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> complex:
        """Leading monomial coefficient (Faber F_n has leading coefficient cap^-n)."""
        top = complex(self.coeffs[-1])
        if self.basis == Basis.FABER:
            return top * self.basis_map.cap ** (-self.degree)
        return top

    def evaluate(self, z: Any) -> Any:
        """Evaluate at a point or an array of points."""
        points = np.asarray(z, dtype=complex)
        flat = np.atleast_1d(points).ravel()
        if self.basis == Basis.FABER:
            values = self.basis_map.faber_vandermonde(self.degree, flat) @ self.coeffs
        else:
            values = np.polynomial.polynomial.polyval(flat, self.coeffs)
        return values.reshape(points.shape) if points.ndim else complex(values[0])

    def check_normalization(self, tol: float = 1e-10) -> bool:
        if self.normalization == Normalization.POINT and not is_infinite(self.norm_point):
            return abs(self.evaluate(self.norm_point) - 1) <= tol
        if self.normalization == Normalization.MONIC:
            return abs(self.leading_coefficient - 1) <= tol
        return True

    def to_report_dict(self) -> Dict[str, Any]:
        point = self.norm_point
        return {
            "basis": self.basis.value,
            "normalization": self.normalization.value,
            "norm_point": point if point is None or is_infinite(point) else complex_pair(point),
            "degree": self.degree,
            "coeffs": [complex_pair(c) for c in self.coeffs],
        }

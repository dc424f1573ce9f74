"""Szego data: Fourier coefficients of log f and the entropy verdict."""

from typing import Any, Dict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from models.geometry import NormalizedMap, complex_pair


class SzegoData(BaseModel):
    """Discrete Fourier data of log f on the boundary, in the Phi_{z0} circle parameter."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nm: NormalizedMap = Field(..., description="Normalized map the data refers to")
    fourier_log: np.ndarray = Field(..., description="Coefficients c_0..c_{M/2} of log f in the Phi_{z0} parameter")
    S_value: float = Field(..., ge=0, description="Entropy integral at z0")
    szego_condition: bool = Field(..., description="False when S is zero at working precision")

    @property
    def base_coefficients(self) -> np.ndarray:
        """Coefficients in the Phi_inf parameter (rotation removed)."""
        k = np.arange(len(self.fourier_log))
        return self.fourier_log * np.exp(1j * k * self.nm.alpha)

    def to_report_dict(self) -> Dict[str, Any]:
        return {
            "S_value": self.S_value,
            "szego_condition": self.szego_condition,
            "fourier_log_head": [complex_pair(c) for c in self.fourier_log[:8]],
        }

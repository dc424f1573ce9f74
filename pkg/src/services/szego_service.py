"""Szego service: disk Szego function, outer functions, reproducing kernel and limit targets."""

import logging
from typing import Any, Optional

import numpy as np

from models.geometry import BoundaryGrid, NormalizedMap, is_infinite
from models.measure import DensitySpec
from models.szego import SzegoData
from services.geometry_service import GeometryService
from services.measure_service import LOG_FLOOR, MeasureService
from utils.errors import NonSzegoError

logger = logging.getLogger(__name__)


def _fourier_log(values: np.ndarray, offset: float) -> np.ndarray:
    """c_k = (1/M) sum_j log f_j e^{-ik theta_j} for k = 0..M/2, Nyquist term halved."""
    M = len(values)
    logs = np.log(np.maximum(values, LOG_FLOOR))
    spectrum = np.fft.fft(logs) / M
    half = M // 2
    coefficients = spectrum[: half + 1] * np.exp(-1j * np.arange(half + 1) * offset)
    coefficients[0] = coefficients[0].real
    if M % 2 == 0:
        coefficients[half] *= 0.5
    return coefficients


class SzegoService:
    """Service for outer functions of boundary densities."""

    def __init__(
        self,
        geometry_service: Optional[GeometryService] = None,
        measure_service: Optional[MeasureService] = None,
    ):
        """Initialize Szego service."""
        self.geometry_service = geometry_service or GeometryService()
        self.measure_service = measure_service or MeasureService(self.geometry_service)

    def szego_disk(self, f_on_circle: np.ndarray, z: Any) -> Any:
        """
        D(z) = exp(c_0/2 + sum_k c_k z^k) for samples of f at the M-th roots of unity.

        Returns 0 when f fails the Szego condition at working precision.
        """
        values = np.asarray(f_on_circle, dtype=float)
        harmonic = np.full(len(values), 1.0 / len(values))
        if self.measure_service.entropy_from_values(harmonic, values) == 0.0:
            return np.zeros_like(np.asarray(z, dtype=complex))
        coefficients = _fourier_log(values, 0.0)
        points = np.asarray(z, dtype=complex)
        series = np.polynomial.polynomial.polyval(points, np.concatenate([[coefficients[0] / 2], coefficients[1:]]))
        return np.exp(series)

    def build(self, nm: NormalizedMap, grid: BoundaryGrid, f: DensitySpec) -> SzegoData:
        """Fourier data of log f in the Phi_{z0} circle parameter, plus the entropy at z0."""
        return self.build_from_values(nm, grid, f.evaluate(grid))

    def build_from_values(self, nm: NormalizedMap, grid: BoundaryGrid, values: np.ndarray) -> SzegoData:
        harmonic = self.geometry_service.harmonic_weights(nm, grid)
        S_value = self.measure_service.entropy_from_values(harmonic, values)
        base = _fourier_log(values, grid.offset)
        k = np.arange(len(base))
        if S_value == 0.0:
            logger.warning(f"Density fails the Szego condition at z0={nm.z0}")
        return SzegoData(
            nm=nm,
            fourier_log=base * np.exp(-1j * k * nm.alpha),
            S_value=S_value,
            szego_condition=S_value > 0.0,
        )

    def log_outer(self, sd: SzegoData, z: Any) -> Any:
        """
        log R_f(z) = c_0 + 2 sum_k conj(c_k) Phi_inf(z)^-k with c_k in the Phi_inf parameter.
        """
        if is_infinite(z):
            return complex(sd.base_coefficients[0].real)
        return self.log_outer_w(sd, self.geometry_service.invert_phi(sd.nm.base, z))

    def log_outer_w(self, sd: SzegoData, w_inf: Any) -> Any:
        """log R_f at the points Psi(w_inf), |w_inf| >= 1 (boundary values included)."""
        coefficients = sd.base_coefficients
        series = np.concatenate([[coefficients[0].real], 2 * np.conj(coefficients[1:])])
        return np.polynomial.polynomial.polyval(1.0 / np.asarray(w_inf, dtype=complex), series)

    def outer_on_omega(self, nm: NormalizedMap, sd: SzegoData, z: Any) -> Any:
        """R_f(z) = conj(D(1/conj(Phi_{z0}(z)))^2); zero for non-Szego densities."""
        if not sd.szego_condition:
            return 0j if np.ndim(z) == 0 else np.zeros(np.shape(z), dtype=complex)
        return np.exp(self.log_outer(sd, z))

    def outer_at_exterior(self, nm: NormalizedMap, grid: BoundaryGrid, f: DensitySpec, z: complex) -> float:
        """|R_f(z)| by the harmonic measure of z, an independent quadrature."""
        harmonic = self.geometry_service.harmonic_weights_at(nm.base, grid, z)
        return float(np.exp(np.sum(harmonic * np.log(np.maximum(f.evaluate(grid), LOG_FLOOR)))))

    def reproducing_kernel(self, nm: NormalizedMap, sd: SzegoData, z: Any, w: Any) -> Any:
        """
        Reproducing kernel of H^2(Omega, mu).

        Raises:
            NonSzegoError: If the density fails the Szego condition
        """
        if not sd.szego_condition:
            raise NonSzegoError("Reproducing kernel is undefined for non-Szego densities")
        w0 = nm.w0
        phi_z = nm.phi(self.geometry_service.invert_phi(nm.base, z))
        phi_w = nm.phi(self.geometry_service.invert_phi(nm.base, w))
        half_z = np.exp(self.log_outer(sd, z) / 2)
        half_w = np.exp(self.log_outer(sd, w) / 2)
        numerator = (1 - w0 / phi_z) * (1 - w0 / np.conj(phi_w))
        denominator = (1 - w0 ** 2) * (1 - 1 / (phi_z * np.conj(phi_w)))
        return numerator / (denominator * half_z * np.conj(half_w))

    def limit_target(self, nm: NormalizedMap, sd: SzegoData, r: float, z: Any) -> Any:
        """
        F_{mu,z0,r}(z) = (R_f(z0) / R_f(z))^(1/r), branch fixed by the analytic log of R_f.

        Raises:
            NonSzegoError: If the density fails the Szego condition
        """
        if not sd.szego_condition:
            raise NonSzegoError("Limit target is undefined for non-Szego densities")
        return np.exp((self.log_outer(sd, nm.z0) - self.log_outer(sd, z)) / r)

    def limit_target_w(self, nm: NormalizedMap, sd: SzegoData, r: float, w_inf: Any) -> Any:
        """limit_target at Psi(w_inf), for boundary nodes and level curves."""
        if not sd.szego_condition:
            raise NonSzegoError("Limit target is undefined for non-Szego densities")
        return np.exp((self.log_outer(sd, nm.z0) - self.log_outer_w(sd, w_inf)) / r)

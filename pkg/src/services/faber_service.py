"""Faber service: Faber polynomials, basis conversion and trial polynomials."""

import logging
import os
import threading
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import solve_triangular

from models.geometry import ExteriorMap, NormalizedMap
from models.polynomial import Basis, Normalization, PolynomialC
from utils.errors import DegreeTooLargeForGridError

logger = logging.getLogger(__name__)


class FaberService:
    """Service for Faber polynomials of an exterior map."""

    def __init__(self, lift_radius: Optional[float] = None, lift_nodes: Optional[int] = None):
        """Initialize Faber service with level-curve settings from the environment."""
        self.lift_radius = lift_radius or float(os.getenv("FABER_LIFT_RADIUS", "1.3"))
        self.lift_nodes = lift_nodes or int(os.getenv("FABER_LIFT_NODES", "1024"))
        self._cache: Dict[Tuple[Any, ...], np.ndarray] = {}
        self._lock = threading.Lock()

    def faber_matrix(self, exterior_map: ExteriorMap, n: int, M: Optional[int] = None) -> np.ndarray:
        """
        Monomial coefficients of F_0..F_n as the columns of an upper-triangular matrix.

        Laurent coefficients of Psi^k are read off the level curve |w| = lift_radius by FFT;
        F_n is the degree-n polynomial p with p(Psi(w)) = w^n + O(1/w).

        Raises:
            DegreeTooLargeForGridError: If 16n exceeds the node count
        """
        nodes = M or self.lift_nodes
        if 16 * n > nodes:
            raise DegreeTooLargeForGridError(f"Degree {n} needs at least {16 * n} nodes, got {nodes}")

        key = (exterior_map.cap, exterior_map.c0, tuple(exterior_map.tail), n)
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached

        radius = self.lift_radius
        w = radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)
        z = exterior_map.psi(w)
        powers = np.ones(nodes, dtype=complex)
        laurent = np.empty((n + 1, n + 1), dtype=complex)
        scaling = radius ** -np.arange(n + 1)
        for k in range(n + 1):
            spectrum = np.fft.fft(powers) / nodes
            laurent[:, k] = spectrum[: n + 1] * scaling
            powers = powers * z
        # Entries below the diagonal are aliasing noise of size radius^-nodes.
        laurent = np.triu(laurent)

        matrix = solve_triangular(laurent, np.eye(n + 1, dtype=complex))
        with self._lock:
            self._cache.setdefault(key, matrix)
        logger.debug(f"Computed Faber matrix of degree {n} for {exterior_map.name} map")
        return matrix

    def faber(self, exterior_map: ExteriorMap, n: int, M: Optional[int] = None) -> PolynomialC:
        """F_n in the monomial basis."""
        matrix = self.faber_matrix(exterior_map, n, M)
        return PolynomialC(coeffs=matrix[:, n].copy(), basis=Basis.MONOMIAL)

    def to_monomial(self, poly: PolynomialC) -> PolynomialC:
        """Convert a Faber-basis polynomial to monomial coefficients."""
        if poly.basis == Basis.MONOMIAL:
            return poly
        matrix = self.faber_matrix(poly.basis_map, poly.degree, max(self.lift_nodes, 16 * poly.degree))
        return PolynomialC(
            coeffs=matrix @ poly.coeffs,
            basis=Basis.MONOMIAL,
            normalization=poly.normalization,
            norm_point=poly.norm_point,
        )

    def faber_trial(self, nm: NormalizedMap, circle_minimizer: PolynomialC, n: int) -> PolynomialC:
        """
        Build q_n = sum_j a_j F^{(z0)}_{n-j} from a circle minimizer p(u) = sum_j b_j u^j, a_j = conj(b_j).

        F^{(z0)}_k = e^{ik alpha} F_k are the Faber polynomials of Phi_{z0}. The result is
        rescaled to P(z0) = 1 for finite z0 and to a monic polynomial at infinity.
        """
        m = circle_minimizer.degree
        if n < m:
            raise ValueError(f"Trial degree {n} is below the circle degree {m}")
        a = np.conj(np.asarray(circle_minimizer.coeffs, dtype=complex))
        coeffs = np.zeros(n + 1, dtype=complex)
        for j in range(m + 1):
            coeffs[n - j] = a[j] * nm.rotation ** (n - j)

        trial = PolynomialC(coeffs=coeffs, basis=Basis.FABER, basis_map=nm.base)
        if nm.is_infinite:
            scaled = coeffs / trial.leading_coefficient
            normalization = Normalization.MONIC
        else:
            scaled = coeffs / trial.evaluate(nm.z0)
            normalization = Normalization.POINT
        return PolynomialC(
            coeffs=scaled,
            basis=Basis.FABER,
            normalization=normalization,
            norm_point=nm.z0,
            basis_map=nm.base,
        )

    def sup_norm(
        self,
        exterior_map: ExteriorMap,
        n: int,
        M: int,
        extra_points: Sequence[Any] = (),
        offset: float = 0.0,
    ) -> float:
        """
        ||F_n||_K over a 4x oversampled boundary grid plus extra points in K.

        The oversampled grid contains every node of the M-point grid with the same offset.
        """
        thetas = offset + 2 * np.pi * np.arange(4 * M) / (4 * M)
        points = np.concatenate(
            [exterior_map.psi(np.exp(1j * thetas)), np.asarray(extra_points, dtype=complex)]
        )
        return float(np.max(np.abs(exterior_map.faber_vandermonde(n, points)[:, n])))

    def faber_shift_constant(
        self, nm: NormalizedMap, n: int, M: int, extra_points: Sequence[Any] = (), offset: float = 0.0
    ) -> float:
        """
        c_n = max(1, ||F_n||_K |Phi_{z0}(z0)|^n / |F_n(z0)|), or max(1, ||F_n||_K) at infinity.
        """
        norm = self.sup_norm(nm.base, n, M, extra_points, offset)
        if nm.is_infinite:
            return max(1.0, norm)
        value = abs(nm.base.faber_vandermonde(n, [nm.z0])[0, n])
        return max(1.0, norm * nm.w0 ** (-n) / value)

    def boundary_remainder(self, exterior_map: ExteriorMap, n: int, count: int = 512) -> float:
        """sup over |w| = 1 of |F_n(Psi(w)) - w^n|."""
        w = np.exp(2j * np.pi * np.arange(count) / count)
        values = exterior_map.faber_vandermonde(n, exterior_map.psi(w))[:, n]
        return float(np.max(np.abs(values - w ** n)))

"""Geometry service: presets, Newton inversion, Green function and harmonic measure."""

import logging
import os
from typing import Any, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from models.geometry import (
    BoundaryGrid,
    ExteriorMap,
    NormalizedMap,
    coerce_complex,
    is_infinite,
)
from utils.errors import InsideRegionError, InvalidMapError, NoConvergenceError

logger = logging.getLogger(__name__)

# |w| below this is outside the domain of Psi.
DOMAIN_SLACK = 1e-12
INJECTIVITY_SAFEGUARD = 1e-6

GEOMETRY_PRESETS = {
    "disk": {"radius": "positive real, default 1", "center": "complex, default 0"},
    "ellipse": {
        "c": "positive real, Psi(w) = c w + d / w",
        "d": "complex with |d| < c",
        "center": "complex, default 0",
    },
    "perturbed_circle": {
        "tail": "list of complex c_1..c_L with sum k|c_k| < cap",
        "cap": "positive real, default 1",
        "center": "complex, default 0",
    },
}


class GeometryService:
    """Service for exterior conformal maps of Jordan regions."""

    def __init__(self, newton_max_iter: Optional[int] = None, newton_tol: Optional[float] = None):
        """Initialize geometry service with Newton settings from the environment."""
        self.newton_max_iter = newton_max_iter or int(os.getenv("NEWTON_MAX_ITER", "100"))
        self.newton_tol = newton_tol or float(os.getenv("NEWTON_TOL", "1e-12"))

    # Presets

    def disk(self, radius: float = 1.0, center: complex = 0j) -> ExteriorMap:
        """Disk of the given radius: Psi(w) = R*w + center."""
        return self._build(cap=radius, c0=center, tail=[], name="disk")

    def ellipse(self, c: float, d: complex, center: complex = 0j) -> ExteriorMap:
        """
        Ellipse Psi(w) = c*w + d/w.

        Raises:
            InvalidMapError: If |d| >= c, where Psi' vanishes on or outside the circle
        """
        if abs(d) >= c * (1 - INJECTIVITY_SAFEGUARD):
            raise InvalidMapError(f"ellipse requires |d| < c, got c={c}, d={d}")
        return self._build(cap=c, c0=center, tail=[d], name="ellipse")

    def perturbed_circle(
        self, tail: Sequence[Any], cap: float = 1.0, center: complex = 0j
    ) -> ExteriorMap:
        """
        Circle with a finite Laurent perturbation.

        Raises:
            InvalidMapError: If sum k|c_k| >= cap (the injectivity certificate fails)
        """
        coefficients = [coerce_complex(c) for c in tail]
        budget = sum(k * abs(c) for k, c in enumerate(coefficients, start=1))
        if budget >= cap:
            raise InvalidMapError(
                f"perturbed_circle requires sum k|c_k| < cap, got {budget:.6g} >= {cap}"
            )
        return self._build(cap=cap, c0=center, tail=coefficients, name="perturbed_circle")

    def from_preset(self, preset: str, params: dict) -> ExteriorMap:
        """Build a preset map by name."""
        params = dict(params or {})
        if preset == "disk":
            return self.disk(
                radius=float(params.get("radius", 1.0)),
                center=coerce_complex(params.get("center", 0j)),
            )
        if preset == "ellipse":
            return self.ellipse(
                c=float(params.get("c", 1.0)),
                d=coerce_complex(params.get("d", 0.25)),
                center=coerce_complex(params.get("center", 0j)),
            )
        if preset == "perturbed_circle":
            return self.perturbed_circle(
                tail=params.get("tail", []),
                cap=float(params.get("cap", 1.0)),
                center=coerce_complex(params.get("center", 0j)),
            )
        raise InvalidMapError(f"Unknown geometry preset: {preset}")

    def _build(self, cap: float, c0: complex, tail: List[complex], name: str) -> ExteriorMap:
        try:
            return ExteriorMap(cap=cap, c0=c0, tail=tail, name=name)
        except ValidationError as e:
            raise InvalidMapError(f"{name} map rejected: {e}")

    # Map evaluation

    def eval_psi(self, exterior_map: ExteriorMap, w: complex) -> complex:
        """
        Evaluate Psi(w) = c*w + c0 + sum c_k w^{-k}.

        Raises:
            InsideRegionError: If |w| < 1 - 1e-12
        """
        if abs(w) < 1 - DOMAIN_SLACK:
            raise InsideRegionError(f"Psi is only defined on |w| >= 1, got |w|={abs(w):.3e}")
        return exterior_map.psi(w)

    def invert_psi(self, exterior_map: ExteriorMap, z: Any) -> np.ndarray:
        """
        Solve Psi(w) = z by damped Newton without checking which side of the circle w lies.

        Raises:
            NoConvergenceError: If any residual stalls above tolerance
        """
        targets = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        w = (targets - exterior_map.c0) / exterior_map.cap
        if not np.any(np.abs(np.asarray(exterior_map.tail, dtype=complex))):
            return w
        small = np.abs(w) < 1.0
        safe = np.where(np.abs(w) > 0, w / np.where(np.abs(w) > 0, np.abs(w), 1.0), 1.0)
        w = np.where(small, 1.05 * safe, w)

        scale = np.maximum(1.0, np.abs(targets))
        residual = exterior_map.psi(w) - targets
        for _ in range(self.newton_max_iter):
            error = np.abs(residual) / scale
            active = error > self.newton_tol
            if not np.any(active):
                break
            step = residual / exterior_map.dpsi(w)
            damping = np.ones(w.shape)
            trial = w - step
            trial_residual = exterior_map.psi(trial) - targets
            for _ in range(30):
                worse = active & ~(np.abs(trial_residual) <= np.abs(residual))
                if not np.any(worse):
                    break
                damping = np.where(worse, damping / 2, damping)
                trial = w - damping * step
                trial_residual = exterior_map.psi(trial) - targets
            w = np.where(active, trial, w)
            residual = np.where(active, trial_residual, residual)

        error = np.abs(residual) / scale
        if not np.all(error <= self.newton_tol):
            worst = float(np.max(np.where(np.isfinite(error), error, np.inf)))
            raise NoConvergenceError(
                f"Newton inversion stalled with relative residual {worst:.3e}", residual=worst
            )
        return w

    def invert_phi(self, exterior_map: ExteriorMap, z: Any) -> Any:
        """
        Compute Phi_inf(z), the inverse of Psi, for points z in Omega.

        Raises:
            NoConvergenceError: If Newton stalls
            InsideRegionError: If the converged preimage has |w| < 1 - DOMAIN_SLACK
        """
        w = self.invert_psi(exterior_map, z)
        if np.any(np.abs(w) < 1 - DOMAIN_SLACK):
            raise InsideRegionError(f"Point(s) {np.asarray(z)} do not lie in Omega")
        return w if np.ndim(z) else complex(w[0])

    def green(self, exterior_map: ExteriorMap, z: Any) -> Any:
        """Green function of Omega with pole at infinity: log|Phi_inf(z)|, zero on Gamma."""
        value = np.maximum(np.log(np.abs(self.invert_phi(exterior_map, z))), 0.0)
        return value if np.ndim(z) else float(value)

    # Normalization

    def normalize(self, exterior_map: ExteriorMap, z0: Any) -> NormalizedMap:
        """
        Build Phi_{z0} = e^{i alpha} Phi_inf with Phi_{z0}(z0) > 0.

        Raises:
            InsideRegionError: If z0 does not lie strictly outside K
        """
        if is_infinite(z0):
            return NormalizedMap(base=exterior_map, z0="inf", rotation=1 + 0j, w0=0.0)
        z0 = complex(coerce_complex(z0))
        phi_z0 = self.invert_phi(exterior_map, z0)
        if abs(phi_z0) <= 1 + DOMAIN_SLACK:
            raise InsideRegionError(f"z0={z0} does not lie strictly outside K")
        rotation = np.exp(-1j * np.angle(phi_z0))
        logger.debug(f"Normalized map at z0={z0}: |Phi(z0)|={abs(phi_z0):.6g}")
        return NormalizedMap(
            base=exterior_map,
            z0=z0,
            rotation=complex(rotation),
            w0=float(1.0 / abs(phi_z0)),
            phi_inf_z0=complex(phi_z0),
        )

    def normalized_capacity(self, nm: NormalizedMap) -> float:
        """C(K, z0) = e^{-g(z0)} for finite z0, capacity for z0 = inf."""
        return nm.capacity

    # Boundary grids and harmonic measure

    def build_grid(
        self, exterior_map: ExteriorMap, M: int, n_max: Optional[int] = None, offset: float = 0.0
    ) -> BoundaryGrid:
        """
        Build a uniform boundary grid of M nodes.

        Raises:
            InvalidMapError: If M is not a power of two, is below 16*n_max, or nodes collide
        """
        if M < 2 or M & (M - 1):
            raise InvalidMapError(f"Grid size must be a power of two, got {M}")
        if n_max is not None and M < 16 * n_max:
            raise InvalidMapError(f"Grid size {M} is below 16 * n_max = {16 * n_max}")

        thetas = offset + 2 * np.pi * np.arange(M) / M
        circle = np.exp(1j * thetas)
        nodes = exterior_map.psi(circle)
        jacobian = np.abs(exterior_map.dpsi(circle))
        if np.min(np.abs(nodes - np.roll(nodes, 1))) <= 0:
            raise InvalidMapError("Boundary grid has coincident nodes")
        return BoundaryGrid(
            base=exterior_map, M=M, offset=offset, thetas=thetas, nodes=nodes, jacobian=jacobian
        )

    def harmonic_weights(self, nm: NormalizedMap, grid: BoundaryGrid) -> np.ndarray:
        """
        Harmonic measure of z0 on the grid: (1/M) * P(w0, e^{i(theta_j + alpha)}).
        """
        if nm.is_infinite:
            return np.full(grid.M, 1.0 / grid.M)
        zeta = np.exp(1j * (grid.thetas + nm.alpha))
        poisson = (1 - nm.w0 ** 2) / np.abs(zeta - nm.w0) ** 2
        return poisson / grid.M

    def harmonic_weights_at(self, exterior_map: ExteriorMap, grid: BoundaryGrid, z: complex) -> np.ndarray:
        """Harmonic measure of an arbitrary point of Omega on the grid."""
        return self.harmonic_weights(self.normalize(exterior_map, z), grid)

    def level_curve(self, nm: NormalizedMap, radius: float, count: int) -> tuple:
        """
        Sample the level curve |Phi| = radius.

        Returns:
            Tuple of (points z, Phi_inf(z) values)
        """
        w = radius * np.exp(2j * np.pi * np.arange(count) / count)
        return nm.base.psi(w), w

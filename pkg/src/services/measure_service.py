"""Measure service: discretized measures, entropy integrals and circle pushforwards."""

import logging
from typing import List, Optional, Sequence

import numpy as np

from models.geometry import BoundaryGrid, NormalizedMap
from models.measure import Atom, DensitySpec, DiscretizedMeasure
from services.geometry_service import GeometryService
from utils.errors import (
    AtomOutsideRegionError,
    InteriorAtomNotPushableError,
    NoConvergenceError,
)

logger = logging.getLogger(__name__)

LOG_FLOOR = 1e-300
NON_SZEGO_CUTOFF = np.log(1e-250)
# |Phi_inf(atom)| - 1 above this puts the atom in Omega.
BOUNDARY_BAND = 1e-9


class MeasureService:
    """Service for mu = f d(omega_z0) + atoms on a boundary grid."""

    def __init__(self, geometry_service: Optional[GeometryService] = None):
        """Initialize measure service."""
        self.geometry_service = geometry_service or GeometryService()

    def build_measure(
        self,
        nm: NormalizedMap,
        grid: BoundaryGrid,
        f: DensitySpec,
        atoms: Optional[Sequence[Atom]] = None,
    ) -> DiscretizedMeasure:
        """
        Build the quadrature form of f d(omega_z0) plus atoms.

        Raises:
            AtomOutsideRegionError: If an atom lies in Omega
        """
        atoms = list(atoms or [])
        for atom in atoms:
            if self._preimage_modulus(nm, atom.location) > 1 + BOUNDARY_BAND:
                raise AtomOutsideRegionError(f"Atom at {atom.location} lies outside K")

        harmonic = self.geometry_service.harmonic_weights(nm, grid)
        density = f.evaluate(grid)
        return DiscretizedMeasure(
            grid=grid,
            boundary_weights=density * harmonic,
            density_values=density,
            harmonic=harmonic,
            atoms=atoms,
        )

    def entropy(self, nm: NormalizedMap, grid: BoundaryGrid, f: DensitySpec) -> float:
        """
        S(f, z0) = exp(sum_j omega_j log max(f_j, 1e-300)).

        Returns 0 when the floored log-integral is at or below log(1e-250).
        """
        harmonic = self.geometry_service.harmonic_weights(nm, grid)
        return self.entropy_from_values(harmonic, f.evaluate(grid))

    def entropy_from_values(self, harmonic: np.ndarray, values: np.ndarray) -> float:
        log_integral = float(np.sum(harmonic * np.log(np.maximum(values, LOG_FLOOR))))
        if log_integral <= NON_SZEGO_CUTOFF:
            return 0.0
        return float(np.exp(log_integral))

    def pushforward_to_circle(self, nm: NormalizedMap, measure: DiscretizedMeasure) -> DiscretizedMeasure:
        """
        Push the measure to the unit circle through Phi_{z0}.

        Raises:
            InteriorAtomNotPushableError: If any atom lies strictly inside K
        """
        circle_atoms: List[Atom] = []
        for atom in measure.atoms:
            w = self._boundary_preimage(nm, atom.location)
            circle_atoms.append(Atom(location=complex(nm.phi(w / abs(w))), mass=atom.mass))

        circle = self.geometry_service.disk(1.0)
        grid = self.geometry_service.build_grid(
            circle, measure.grid.M, offset=measure.grid.offset + nm.alpha
        )
        return DiscretizedMeasure(
            grid=grid,
            boundary_weights=measure.boundary_weights.copy(),
            density_values=measure.density_values.copy(),
            harmonic=measure.harmonic.copy(),
            atoms=circle_atoms,
            on_circle=True,
        )

    def _preimage_modulus(self, nm: NormalizedMap, z: complex) -> float:
        try:
            modulus = float(np.abs(self.geometry_service.invert_psi(nm.base, z))[0])
        except NoConvergenceError:
            # Newton only fails for points without an exterior preimage.
            return 0.0
        # w = 0 is the pole of Psi: the point has no preimage on |w| >= 1.
        return modulus if np.isfinite(modulus) else 0.0

    def _boundary_preimage(self, nm: NormalizedMap, z: complex) -> complex:
        try:
            w = complex(self.geometry_service.invert_psi(nm.base, z)[0])
        except NoConvergenceError:
            raise InteriorAtomNotPushableError(f"Atom at {z} has no boundary preimage")
        if abs(abs(w) - 1) > BOUNDARY_BAND:
            raise InteriorAtomNotPushableError(f"Atom at {z} lies inside K, not on the boundary")
        return w

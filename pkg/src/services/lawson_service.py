"""Lawson service: weighted Chebyshev and residual polynomials, OPMs and the Ahlfors problem."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from models.geometry import BoundaryGrid, NormalizedMap
from models.measure import Atom, DensityKind, DensitySpec
from models.minimax import (
    AhlforsLimit,
    AhlforsResult,
    LawsonInit,
    LawsonOptions,
    LawsonState,
    ResidualSolution,
)
from models.polynomial import Basis, Normalization, PolynomialC
from services.christoffel_service import ChristoffelService
from services.geometry_service import GeometryService
from services.measure_service import MeasureService
from services.szego_service import SzegoService
from utils.errors import AhlforsPointError, MinimaxError, RhoTooSparseError, StalledGapError

logger = logging.getLogger(__name__)

MIN_EXPONENT = 1e-6
# Rounding slack for the weak duality assertion.
DUALITY_SLACK = 1e-9
# Relative dual decreases below this are rounding noise and do not reject a step.
DUAL_DECREASE_RTOL = 1e-12
MERGE_SPACINGS = 3


class LawsonService:
    """Service for t_n(rho, z0) by Lawson iteration."""

    def __init__(
        self,
        geometry_service: Optional[GeometryService] = None,
        measure_service: Optional[MeasureService] = None,
        szego_service: Optional[SzegoService] = None,
        christoffel_service: Optional[ChristoffelService] = None,
        max_iter: Optional[int] = None,
        gap_tol: Optional[float] = None,
        opm_max_iter: Optional[int] = None,
        opm_gap_tol: Optional[float] = None,
        max_workers: Optional[int] = None,
    ):
        """Initialize Lawson service with stopping rules from the environment."""
        self.geometry_service = geometry_service or GeometryService()
        self.measure_service = measure_service or MeasureService(self.geometry_service)
        self.szego_service = szego_service or SzegoService(self.geometry_service, self.measure_service)
        self.christoffel_service = christoffel_service or ChristoffelService(
            self.geometry_service, self.measure_service, self.szego_service
        )
        self.max_iter = max_iter or int(os.getenv("LAWSON_MAX_ITER", "2000"))
        self.gap_tol = gap_tol or float(os.getenv("LAWSON_GAP_TOL", "1e-3"))
        self.opm_max_iter = opm_max_iter or int(os.getenv("LAWSON_OPM_MAX_ITER", "50000"))
        self.opm_gap_tol = opm_gap_tol or float(os.getenv("LAWSON_OPM_GAP_TOL", "1e-9"))
        self.max_workers = max_workers

    def lawson_solve(
        self,
        nm: NormalizedMap,
        grid: BoundaryGrid,
        rho: DensitySpec,
        atoms: Sequence[Atom],
        n: int,
        opts: Optional[LawsonOptions] = None,
    ) -> ResidualSolution:
        """
        Solve min ||rho P|| over P in P_n with P(z0) = 1 (or monic at infinity).

        Raises:
            RhoTooSparseError: If rho is positive on fewer than n + 1 support points
            StalledGapError: If the gap target is missed and opts.strict is set
        """
        opts = opts or LawsonOptions()
        tol = opts.tol or self.gap_tol
        max_iter = opts.max_iter or self.max_iter

        locations = np.array([atom.location for atom in atoms], dtype=complex)
        points = np.concatenate([grid.nodes, locations])
        rho_values = rho.evaluate(grid)
        if locations.size:
            rho_values = np.concatenate([rho_values, rho.evaluate_points(locations, nm.base)])
        if np.count_nonzero(rho_values > 0) < n + 1:
            raise RhoTooSparseError(
                f"rho is positive on {np.count_nonzero(rho_values > 0)} points, degree {n} needs {n + 1}"
            )

        V = nm.base.faber_vandermonde(n, points)
        b = self.christoffel_service.functional(nm, n)
        rho_squared = rho_values ** 2

        nu = self._initial_measure(nm, grid, len(points), opts.init)

        def respond(weights: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float, float]:
            coeffs, lam, _ = self.christoffel_service.weighted_l2(V, rho_squared * weights, b)
            moduli = rho_values * np.abs(V @ coeffs)
            dual, primal = float(np.sqrt(lam)), float(np.max(moduli))
            if dual > primal * (1 + DUALITY_SLACK):
                raise MinimaxError(f"Weak duality violated: dual {dual:.17g} > primal {primal:.17g}")
            return coeffs, moduli, dual, primal

        coeffs, moduli, dual, primal = respond(nu)
        best_primal, best_coeffs = primal, coeffs
        best_dual, best_nu = dual, nu
        history: List[Dict[str, float]] = [{"iter": 0, "dual": dual, "primal": primal}]
        gamma = 1.0
        iteration = 0
        while (best_primal - best_dual) / best_primal > tol and iteration < max_iter:
            iteration += 1
            proposal = nu * (moduli / primal) ** gamma
            proposal /= np.sum(proposal)
            new_coeffs, new_moduli, new_dual, new_primal = respond(proposal)
            history.append({"iter": iteration, "dual": new_dual, "primal": new_primal})
            if new_primal < best_primal:
                best_primal, best_coeffs = new_primal, new_coeffs
            if new_dual < dual * (1 - DUAL_DECREASE_RTOL):
                gamma /= 2
                if gamma < MIN_EXPONENT:
                    logger.debug(f"Lawson step exponent collapsed at iteration {iteration}")
                    break
                continue
            nu, coeffs, moduli, dual, primal = proposal, new_coeffs, new_moduli, new_dual, new_primal
            gamma = min(1.0, 2 * gamma)
            if dual > best_dual:
                best_dual, best_nu = dual, nu

        gap_rel = max(0.0, (best_primal - best_dual) / best_primal)
        poly = PolynomialC(
            coeffs=best_coeffs,
            basis=Basis.FABER,
            normalization=Normalization.MONIC if nm.is_infinite else Normalization.POINT,
            norm_point=nm.z0,
            basis_map=nm.base,
        )
        node_values = rho_values[: grid.M] * np.abs(poly.evaluate(grid.nodes))
        angles, values = self.extreme_points(grid, node_values, best_primal, gap_rel)
        stalled = gap_rel > tol
        solution = ResidualSolution(
            poly=poly,
            n=n,
            t_value=best_primal,
            widom_inf=best_primal * nm.capacity ** (-n),
            opm=best_nu,
            extreme_points=angles,
            extreme_values=values,
            gap_rel=gap_rel,
            dual=best_dual,
            iterations=iteration,
            stalled=stalled,
            offgrid_inflation=self._offgrid_inflation(n, grid.M),
            history=history,
            state=LawsonState(nu=best_nu, poly=poly, dual=best_dual, primal=best_primal, iter=iteration),
        )
        if stalled:
            logger.warning(f"Lawson stalled at n={n}: gap_rel={gap_rel:.3e} after {iteration} iterations")
            if opts.strict:
                raise StalledGapError(f"Lawson gap {gap_rel:.3e} above target {tol:.1e}", best=solution)
        return solution

    def _initial_measure(self, nm: NormalizedMap, grid: BoundaryGrid, size: int, init: LawsonInit) -> np.ndarray:
        nu = np.full(size, 1.0 / size)
        if init == LawsonInit.HARMONIC:
            nu[: grid.M] = self.geometry_service.harmonic_weights(nm, grid)
            nu /= np.sum(nu)
        return nu

    @staticmethod
    def _offgrid_inflation(n: int, M: int) -> float:
        """Bound on sup / grid max for degree-n data on M equispaced nodes."""
        return float(1.0 / np.cos(np.pi * n / M)) if 2 * n < M else float("inf")

    def extreme_points(
        self, grid: BoundaryGrid, node_values: np.ndarray, t_value: float, gap_rel: float
    ) -> Tuple[List[float], List[float]]:
        """
        Angles where rho|T| is within min(0.999, 1 - 10 gap_rel) of t, merged within 3 grid spacings.
        """
        threshold = min(0.999, 1 - 10 * gap_rel) * t_value
        indices = np.nonzero(node_values >= threshold)[0]
        if indices.size == 0:
            return [], []
        radius = MERGE_SPACINGS * grid.spacing
        thetas = grid.thetas[indices] - grid.offset

        clusters: List[List[int]] = []
        for position, theta in enumerate(thetas):
            if clusters and theta - thetas[clusters[-1][0]] <= radius:
                clusters[-1].append(position)
            else:
                clusters.append([position])
        if len(clusters) > 1 and thetas[clusters[0][0]] + 2 * np.pi - thetas[clusters[-1][0]] <= radius:
            clusters[0] = clusters.pop() + clusters[0]

        angles, values = [], []
        for cluster in clusters:
            best = max(cluster, key=lambda position: node_values[indices[position]])
            angles.append(float(grid.thetas[indices[best]]))
            values.append(float(node_values[indices[best]]))
        return angles, values

    def duality_gap_certificate(self, state: LawsonState) -> Tuple[float, float]:
        """(lower, upper) bracket of t_n: dual <= t_n <= primal."""
        return state.dual, state.primal

    def opm_weakstar_distance(self, state: LawsonState, nm: NormalizedMap, grid: BoundaryGrid) -> float:
        """Kolmogorov-Smirnov distance between the boundary part of nu and the harmonic weights."""
        boundary = state.nu[: grid.M]
        boundary = boundary / np.sum(boundary)
        harmonic = self.geometry_service.harmonic_weights(nm, grid)
        return float(np.max(np.abs(np.cumsum(boundary) - np.cumsum(harmonic))))

    def residual_widom_sweep(
        self,
        nm: NormalizedMap,
        grid: BoundaryGrid,
        rho: DensitySpec,
        n_range: Sequence[int],
        atoms: Sequence[Atom] = (),
        opts: Optional[LawsonOptions] = None,
    ) -> List[Dict[str, Any]]:
        """
        t_n and W_{inf,n} = t_n / C^n per degree, with the entropy of rho and the level-curve error.
        """
        S = self.measure_service.entropy(nm, grid, rho)
        sd = self.szego_service.build(nm, grid, rho) if S > 0 else None

        def solve_row(n: int) -> Dict[str, Any]:
            solution = self.lawson_solve(nm, grid, rho, atoms, n, opts)
            level_curve_error = None
            if sd is not None:
                level_curve_error = self.christoffel_service.level_curve_error(nm, solution.poly, sd, 1.0)
            return {
                "n": n,
                "t_value": solution.t_value,
                "widom_inf": solution.widom_inf,
                "entropy": S,
                "dual_widom": solution.dual * nm.capacity ** (-n),
                "gap_rel": solution.gap_rel,
                "extreme_points": len(solution.extreme_points),
                "extreme_min_ratio": min(solution.extreme_values) / solution.t_value if solution.extreme_values else 0.0,
                "ks_distance": self.opm_weakstar_distance(solution.state, nm, grid),
                "level_curve_error": level_curve_error,
                "stalled": solution.stalled,
            }

        degrees = list(n_range)
        logger.info(f"Residual sweep over {len(degrees)} degrees (S={S:.6g})")
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            return list(executor.map(solve_row, degrees))

    def opm_trace(
        self,
        nm: NormalizedMap,
        grid: BoundaryGrid,
        rho: DensitySpec,
        n_range: Sequence[int],
        atoms: Sequence[Atom] = (),
        tol: Optional[float] = None,
    ) -> List[Dict[str, Any]]:
        """Residual rows solved to the OPM gap target (LAWSON_OPM_GAP_TOL unless tol is given)."""
        opts = LawsonOptions(tol=tol or self.opm_gap_tol, max_iter=self.opm_max_iter)
        logger.info(f"OPM trace to gap {opts.tol:.1e}")
        return self.residual_widom_sweep(nm, grid, rho, n_range, atoms, opts)

    def ahlfors_solve(
        self, nm: NormalizedMap, grid: BoundaryGrid, n: int, opts: Optional[LawsonOptions] = None
    ) -> AhlforsResult:
        """
        A_n(z0) = t_{n-1}(|. - z0|, z0) and Q_n(z) = (z - z0) T_{n-1}(z).

        Raises:
            AhlforsPointError: If z0 is infinite
        """
        if nm.is_infinite:
            raise AhlforsPointError("Ahlfors problem needs a finite z0")
        rho = DensitySpec(kind=DensityKind.ABS_LINEAR, a=nm.z0)
        residual = self.lawson_solve(nm, grid, rho, [], n - 1, opts)
        return AhlforsResult(n=n, z0=nm.z0, A_value=residual.t_value, residual=residual)

    def ahlfors_limit_closed_form(self, nm: NormalizedMap) -> AhlforsLimit:
        """
        Closed-form Ahlfors limit at finite z0.

        limit_value = |Phi(z0)|^2 - 1 is the limit of |Phi'(z0)| |Phi(z0)|^n A_n, since
        |Phi(z0)|^(n-1) A_n tends to entropy_value = limit_value / |Phi'(z0) Phi(z0)| = S(|. - z0|, z0).

        Raises:
            AhlforsPointError: If z0 is infinite
        """
        if nm.is_infinite:
            raise AhlforsPointError("Ahlfors problem needs a finite z0")
        phi0 = nm.phi_inf_z0
        derivative = 1.0 / nm.base.dpsi(phi0)
        scale = abs(derivative * phi0)
        limit_value = abs(phi0) ** 2 - 1
        geometry_service = self.geometry_service
        base = nm.base

        def limit_function(z: Any) -> Any:
            phi = geometry_service.invert_phi(base, z)
            return (phi - phi0) * limit_value / (np.conj(phi0) * phi - 1)

        return AhlforsLimit(
            limit_value=limit_value,
            entropy_value=limit_value / scale,
            scale=scale,
            derivative_modulus=abs(derivative),
            phi_modulus=abs(phi0),
            limit_function=limit_function,
        )

    def ahlfors_sweep(
        self, nm: NormalizedMap, grid: BoundaryGrid, n_range: Sequence[int], opts: Optional[LawsonOptions] = None
    ) -> List[Dict[str, Any]]:
        """Rows of n, A_n and |Phi'(z0)| |Phi(z0)|^n A_n against the closed-form limit."""
        limit = self.ahlfors_limit_closed_form(nm)

        def solve_row(n: int) -> Dict[str, Any]:
            result = self.ahlfors_solve(nm, grid, n, opts)
            scaled = limit.scaled(n, result.A_value)
            return {
                "n": n,
                "A_n": result.A_value,
                "scaled_A_n": scaled,
                "limit_value": limit.limit_value,
                "rel_error": abs(scaled - limit.limit_value) / limit.limit_value,
                "gap_rel": result.residual.gap_rel,
            }

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            return list(executor.map(solve_row, [n for n in n_range if n >= 1]))

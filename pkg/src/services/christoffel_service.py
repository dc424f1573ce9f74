"""Christoffel service: L^r extremal polynomials, Widom sweeps and continuity probes."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from models.christoffel import (
    ChristoffelSolution,
    ContinuityRow,
    SolveOutcome,
    SolverReport,
    WidomRow,
)
from models.geometry import ExteriorMap, NormalizedMap, is_infinite
from models.measure import DiscretizedMeasure
from models.polynomial import Basis, Normalization, PolynomialC
from models.szego import SzegoData
from services.geometry_service import GeometryService
from services.measure_service import MeasureService
from services.szego_service import SzegoService
from utils.errors import IrlsNoConvergenceError, RankDeficientError

logger = logging.getLogger(__name__)

EPSILON_FLOOR = 1e-10
LEVEL_CURVE_RADIUS = 1.5
LEVEL_CURVE_POINTS = 256


class ChristoffelService:
    """Service for lambda_n(mu, z0, r) on discretized measures."""

    def __init__(
        self,
        geometry_service: Optional[GeometryService] = None,
        measure_service: Optional[MeasureService] = None,
        szego_service: Optional[SzegoService] = None,
        jitter: Optional[float] = None,
        kkt_tol: Optional[float] = None,
        irls_max_iter: Optional[int] = None,
        irls_tol: Optional[float] = None,
        irls_accept_tol: Optional[float] = None,
        irls_starts: Optional[int] = None,
        max_workers: Optional[int] = None,
        seed: int = 0,
    ):
        """Initialize Christoffel service with solver settings from the environment."""
        self.geometry_service = geometry_service or GeometryService()
        self.measure_service = measure_service or MeasureService(self.geometry_service)
        self.szego_service = szego_service or SzegoService(self.geometry_service, self.measure_service)
        self.jitter = jitter or float(os.getenv("CHOLESKY_JITTER", "1e-13"))
        self.kkt_tol = kkt_tol or float(os.getenv("KKT_TOL", "1e-10"))
        self.irls_max_iter = irls_max_iter or int(os.getenv("IRLS_MAX_ITER", "500"))
        self.irls_tol = irls_tol or float(os.getenv("IRLS_TOL", "1e-11"))
        self.irls_accept_tol = irls_accept_tol or float(os.getenv("IRLS_ACCEPT_TOL", "1e-6"))
        self.irls_starts = irls_starts or int(os.getenv("IRLS_STARTS", "8"))
        self.max_workers = max_workers
        self.seed = seed

    # Normalization functional

    def functional(self, nm: NormalizedMap, n: int) -> np.ndarray:
        """b = conj(l(F_k)), k = 0..n, for l = evaluation at z0 or the leading coefficient."""
        if nm.is_infinite:
            b = np.zeros(n + 1, dtype=complex)
            b[n] = nm.base.cap ** (-n)
            return b
        return np.conj(nm.base.faber_vandermonde(n, [nm.z0])[0])

    def _normalization(self, nm: NormalizedMap) -> Normalization:
        return Normalization.MONIC if nm.is_infinite else Normalization.POINT

    # Weighted least squares core

    def weighted_l2(self, V: np.ndarray, weights: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, float, float]:
        """
        Minimize a^H G a subject to b^H a = 1 with G = V^H diag(weights) V.

        Returns:
            Tuple of (coefficients, lambda, relative normal-equation residual)

        Raises:
            RankDeficientError: If the regularized Gram matrix is not positive definite
        """
        G = V.conj().T @ (weights[:, None] * V)
        try:
            factor = cho_factor(G, lower=False)
        except LinAlgError:
            # Regularize only when the plain factorization breaks.
            shift = self.jitter * float(np.real(np.trace(G)))
            try:
                factor = cho_factor(G + shift * np.eye(len(b)), lower=False)
            except LinAlgError as e:
                raise RankDeficientError(f"Gram matrix is not positive definite: {e}")

        x = cho_solve(factor, b)
        for _ in range(3):
            x = x + cho_solve(factor, b - G @ x)
        residual = float(np.linalg.norm(G @ x - b) / np.linalg.norm(b))
        denominator = float(np.real(np.vdot(b, x)))
        if denominator <= 0:
            raise RankDeficientError("Normalization functional is degenerate on the support")
        return x / denominator, 1.0 / denominator, residual

    def _exactly_zero(self, nm: NormalizedMap, support: np.ndarray, n: int) -> PolynomialC:
        roots = np.asarray(support, dtype=complex)
        coeffs = np.polynomial.polynomial.polyfromroots(roots) if roots.size else np.ones(1, dtype=complex)
        coeffs = np.concatenate([np.zeros(n - roots.size, dtype=complex), coeffs])
        if not nm.is_infinite:
            coeffs = coeffs / np.polynomial.polynomial.polyval(nm.z0, coeffs)
        return PolynomialC(
            coeffs=coeffs,
            basis=Basis.MONOMIAL,
            normalization=self._normalization(nm),
            norm_point=nm.z0,
        )

    def _objective(self, values: np.ndarray, weights: np.ndarray, r: float) -> float:
        return float(np.sum(weights * np.abs(values) ** r))

    def _irls(
        self,
        V: np.ndarray,
        weights: np.ndarray,
        b: np.ndarray,
        start: np.ndarray,
        r: float,
        scale: float,
    ) -> Tuple[np.ndarray, float, int, float, bool]:
        """
        Safeguarded IRLS from a feasible start.

        Returns:
            Tuple of (coefficients, objective, iterations, last relative change, converged)
        """
        a = start
        values = V @ a
        objective = self._objective(values, weights, r)
        change = np.inf
        for k in range(self.irls_max_iter):
            epsilon = max(EPSILON_FLOOR, 0.1 * 0.5 ** k)
            scaled = np.abs(values) * scale
            reweighted = weights * (scaled ** 2 + epsilon ** 2) ** ((r - 2) / 2)
            candidate, _, _ = self.weighted_l2(V, reweighted, b)

            step = 1.0
            trial, trial_values, trial_objective = a, values, objective
            for _ in range(40):
                proposal = a + step * (candidate - a)
                proposal_values = V @ proposal
                proposal_objective = self._objective(proposal_values, weights, r)
                if proposal_objective <= objective:
                    trial, trial_values, trial_objective = proposal, proposal_values, proposal_objective
                    break
                step /= 2

            change = (objective - trial_objective) / objective if objective > 0 else 0.0
            a, values, objective = trial, trial_values, trial_objective
            if change <= self.irls_tol and epsilon <= EPSILON_FLOOR:
                return a, objective, k + 1, change, True
        return a, objective, self.irls_max_iter, change, False

    def _minimize(
        self,
        V: np.ndarray,
        weights: np.ndarray,
        b: np.ndarray,
        r: float,
        scale: float,
    ) -> Tuple[np.ndarray, float, SolverReport]:
        """L^r minimization of sum_j weights_j |(V a)_j|^r subject to b^H a = 1."""
        a0, lam, residual = self.weighted_l2(V, weights, b)
        if r == 2:
            if residual > self.kkt_tol:
                logger.warning(f"Normal-equation residual {residual:.3e} exceeds {self.kkt_tol:.1e}")
            return a0, lam, SolverReport(final_residual=residual)

        starts = [a0]
        if r < 1:
            rng = np.random.default_rng(self.seed)
            norm_b = float(np.real(np.vdot(b, b)))
            for _ in range(self.irls_starts - 1):
                direction = rng.normal(size=len(b)) + 1j * rng.normal(size=len(b))
                direction = direction - b * (np.vdot(b, direction) / norm_b)
                direction *= 0.1 * np.linalg.norm(a0) / max(np.linalg.norm(direction), 1e-300)
                starts.append(a0 + direction)

        best = None
        for index, start in enumerate(starts):
            a, objective, iterations, change, converged = self._irls(V, weights, b, start, r, scale)
            if best is None or objective < best[1]:
                best = (a, objective, iterations, change, converged, index)

        a, objective, iterations, change, converged, index = best
        report = SolverReport(
            iterations=iterations,
            final_residual=float(change),
            multi_start_best=index if r < 1 else None,
            nonconvex=r < 1,
            outcome=SolveOutcome.CONVERGED if converged else SolveOutcome.ACCEPTED_LOOSE,
        )
        return a, objective, report

    # Public solvers

    def solve_l2(self, nm: NormalizedMap, measure: DiscretizedMeasure, n: int) -> ChristoffelSolution:
        """Exact L2 Christoffel minimizer in the Faber basis."""
        return self.solve_lr(nm, measure, n, 2.0)

    def solve_lr(self, nm: NormalizedMap, measure: DiscretizedMeasure, n: int, r: float) -> ChristoffelSolution:
        """
        L^r Christoffel minimizer for 0 < r < infinity.

        Raises:
            RankDeficientError: If the Gram matrix cannot be factored
            IrlsNoConvergenceError: If IRLS stops far from stationarity; the best iterate is attached
        """
        points = measure.support_points
        weights = measure.support_weights
        capacity = nm.capacity

        positive = points[weights > 0]
        if positive.size <= n:
            logger.info(f"Measure support has {positive.size} points for degree {n}: lambda is zero")
            return ChristoffelSolution(
                poly=self._exactly_zero(nm, positive, n),
                lambda_value=0.0,
                widom=0.0,
                r=r,
                n=n,
                solver_report=SolverReport(outcome=SolveOutcome.EXACTLY_ZERO),
            )

        V = nm.base.faber_vandermonde(n, points)
        b = self.functional(nm, n)
        a, lam, report = self._minimize(V, weights, b, r, capacity ** (-n))

        recomputed = self._objective(V @ a, weights, r)
        report = report.model_copy(update={"recomputed_error": abs(recomputed - lam) / lam if lam > 0 else 0.0})
        solution = ChristoffelSolution(
            poly=PolynomialC(
                coeffs=a,
                basis=Basis.FABER,
                normalization=self._normalization(nm),
                norm_point=nm.z0,
                basis_map=nm.base,
            ),
            lambda_value=lam,
            widom=capacity ** (-n) * lam ** (1.0 / r),
            r=r,
            n=n,
            solver_report=report,
        )
        if report.outcome == SolveOutcome.ACCEPTED_LOOSE:
            if report.final_residual > self.irls_accept_tol:
                raise IrlsNoConvergenceError(
                    f"IRLS stopped after {report.iterations} iterations at relative change "
                    f"{report.final_residual:.3e}",
                    best=solution,
                )
            logger.warning(f"IRLS accepted at loose tolerance for n={n}, r={r}")
        return solution

    def solve_circle(self, circle_measure: DiscretizedMeasure, w0: float, m: int, r: float = 2.0) -> ChristoffelSolution:
        """
        Christoffel problem on the unit circle normalized at the interior point w0 in [0, 1).
        """
        points = circle_measure.support_points
        weights = circle_measure.support_weights
        V = np.vander(points, m + 1, increasing=True)
        b = np.conj(w0 ** np.arange(m + 1)).astype(complex)
        a, lam, report = self._minimize(V, weights, b, r, 1.0)
        return ChristoffelSolution(
            poly=PolynomialC(coeffs=a, basis=Basis.MONOMIAL, normalization=Normalization.POINT, norm_point=complex(w0)),
            lambda_value=lam,
            widom=lam ** (1.0 / r),
            r=r,
            n=m,
            solver_report=report,
        )

    # Diagnostics and sweeps

    def strong_asymptotics_error(
        self,
        nm: NormalizedMap,
        measure: DiscretizedMeasure,
        poly: PolynomialC,
        sd: SzegoData,
        r: float,
    ) -> Tuple[float, float]:
        """
        Distance of C^-n Phi_{z0}^-n P_n from the limit target F_{mu,z0,r}.

        Returns:
            Tuple of (H^r error on the boundary nodes, sup error on the level curve |Phi| = 1.5)
        """
        n = poly.degree
        capacity = nm.capacity

        w_nodes = measure.grid.circle_points
        scaled = poly.evaluate(measure.grid.nodes) / (capacity * nm.phi(w_nodes)) ** n
        target = self.szego_service.limit_target_w(nm, sd, r, w_nodes)
        h_r_error = float(np.sum(measure.boundary_weights * np.abs(scaled - target) ** r))
        return h_r_error, self.level_curve_error(nm, poly, sd, r)

    def level_curve_error(self, nm: NormalizedMap, poly: PolynomialC, sd: SzegoData, r: float) -> float:
        """sup over |Phi| = 1.5 of |C^-n Phi_{z0}^-n P_n - F_{mu,z0,r}|."""
        n = poly.degree
        z_curve, w_curve = self.geometry_service.level_curve(nm, LEVEL_CURVE_RADIUS, LEVEL_CURVE_POINTS)
        scaled = poly.evaluate(z_curve) / (nm.capacity * nm.phi(w_curve)) ** n
        target = self.szego_service.limit_target_w(nm, sd, r, w_curve)
        return float(np.max(np.abs(scaled - target)))

    def widom_sweep(
        self,
        nm: NormalizedMap,
        measure: DiscretizedMeasure,
        r: float,
        n_range: Sequence[int],
        diagnostics: bool = True,
    ) -> List[WidomRow]:
        """
        lambda_n and W^r_{r,n} = lambda_n / C^{nr} over a range of degrees.
        """
        harmonic = self.geometry_service.harmonic_weights(nm, measure.grid)
        S = self.measure_service.entropy_from_values(harmonic, measure.density_values)
        sd = None
        if diagnostics and S > 0:
            sd = self.szego_service.build_from_values(nm, measure.grid, measure.density_values)
        capacity = nm.capacity

        def solve_row(n: int) -> WidomRow:
            solution = self.solve_lr(nm, measure, n, r)
            scale = capacity ** (n * r)
            lower_bound = S * scale
            gap = solution.lambda_value / lower_bound - 1 if lower_bound > 0 else float("inf")
            h_r_error = level_curve_error = None
            if sd is not None and solution.solver_report.outcome != SolveOutcome.EXACTLY_ZERO:
                h_r_error, level_curve_error = self.strong_asymptotics_error(nm, measure, solution.poly, sd, r)
            return WidomRow(
                n=n,
                lambda_value=solution.lambda_value,
                widom_r=solution.lambda_value / scale,
                lower_bound=lower_bound,
                gap=gap,
                h_r_error=h_r_error,
                level_curve_error=level_curve_error,
            )

        degrees = list(n_range)
        logger.info(f"Widom sweep r={r} over {len(degrees)} degrees (S={S:.6g})")
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            return list(executor.map(solve_row, degrees))

    def widom_continuity_probe(
        self,
        exterior_map: ExteriorMap,
        measure: DiscretizedMeasure,
        r: float,
        n: int,
        z0: Any,
        path: Sequence[Any],
    ) -> List[ContinuityRow]:
        """
        W_{r,n}(mu, zeta) along a path zeta_k -> z0; the first row is z0 itself.
        """
        reference = self.solve_lr(self.geometry_service.normalize(exterior_map, z0), measure, n, r).widom
        rows = [ContinuityRow(k=0, zeta=z0, widom=reference, deviation=0.0)]
        for k, zeta in enumerate(path, start=1):
            nm = self.geometry_service.normalize(exterior_map, zeta)
            widom = self.solve_lr(nm, measure, n, r).widom
            rows.append(ContinuityRow(k=k, zeta=zeta, widom=widom, deviation=abs(widom - reference)))
        return rows

    @staticmethod
    def default_path(z0: Any, steps: int) -> List[Any]:
        """zeta_k = z0 + 10^-k outward for finite z0, zeta_k = 10^k for z0 = inf."""
        if is_infinite(z0):
            return [complex(10.0 ** k) for k in range(1, steps + 1)]
        z0 = complex(z0)
        direction = z0 / abs(z0) if abs(z0) > 0 else 1.0
        return [z0 + 10.0 ** (-k) * direction for k in range(1, steps + 1)]

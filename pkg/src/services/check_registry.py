"""Declarative registry of asymptotic checks evaluated over sweep tables."""

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Tuple

from models.experiment import CheckVerdict, SweepKind, Tolerances

Rows = List[Dict[str, Any]]
Predicate = Callable[[Rows, Dict[str, Any], Tolerances], Tuple[bool, str]]

LOWER_BOUND_SLACK = 1e-9
NON_SZEGO_DECAY = 0.5
EXTREME_VALUE_RATIO = 0.99
CONTINUITY_REL_TOL = 1e-3


@dataclass(frozen=True)
class RegisteredCheck:
    check_id: str
    theorem: str
    kind: SweepKind
    predicate: Predicate


CHECKS: List[RegisteredCheck] = []


def register(check_id: str, theorem: str, kind: SweepKind) -> Callable[[Predicate], Predicate]:
    """Register a predicate as the check for one statement."""

    def decorator(predicate: Predicate) -> Predicate:
        CHECKS.append(RegisteredCheck(check_id, theorem, kind, predicate))
        return predicate

    return decorator


def checks_for(kind: SweepKind) -> List[RegisteredCheck]:
    return [check for check in CHECKS if check.kind == kind]


def evaluate(kind: SweepKind, rows: Rows, meta: Dict[str, Any], tolerances: Tolerances) -> List[CheckVerdict]:
    """Run every check registered for the sweep kind."""
    verdicts = []
    for check in checks_for(kind):
        if not rows:
            verdicts.append(CheckVerdict(check_id=check.check_id, theorem=check.theorem, passed=False, detail="empty table"))
            continue
        passed, detail = check.predicate(rows, meta, tolerances)
        verdicts.append(CheckVerdict(check_id=check.check_id, theorem=check.theorem, passed=passed, detail=detail))
    return verdicts


def _limit_verdict(first: float, last: float, S: float, tol: float) -> Tuple[bool, str]:
    if S > 0:
        deviation = abs(last / S - 1)
        return deviation <= tol, f"last/S - 1 = {deviation:.3e} (tol {tol:.1e}, S = {S:.6g})"
    return last <= NON_SZEGO_DECAY * first, f"S = 0: first {first:.3e}, last {last:.3e}"


@register("widom_lower_bound", "Universal lower bound lambda_n >= S * C^(nr)", SweepKind.WIDOM)
def _widom_lower_bound(rows: Rows, meta: Dict[str, Any], tolerances: Tolerances) -> Tuple[bool, str]:
    violations = [row["n"] for row in rows if row["lambda"] < row["lower_bound"] * (1 - LOWER_BOUND_SLACK)]
    return not violations, f"violations at n = {violations}" if violations else "no violations"


@register("widom_limit", "Widom factor limit W^r_(r,n) -> S(f, z0)", SweepKind.WIDOM)
def _widom_limit(rows: Rows, meta: Dict[str, Any], tolerances: Tolerances) -> Tuple[bool, str]:
    return _limit_verdict(rows[0]["widom_r"], rows[-1]["widom_r"], meta["S"], tolerances.sweep_tol)


@register("widom_monotone", "lambda_n is nonincreasing in n under point normalization", SweepKind.WIDOM)
def _widom_monotone(rows: Rows, meta: Dict[str, Any], tolerances: Tolerances) -> Tuple[bool, str]:
    if meta.get("monic"):
        return True, "not asserted for monic normalization"
    values = [row["lambda"] for row in rows]
    increases = [rows[i]["n"] for i in range(1, len(values)) if values[i] > values[i - 1] * (1 + 1e-9)]
    return not increases, f"increases at n = {increases}" if increases else "nonincreasing"


@register("residual_lower_bound", "Weighted Chebyshev lower bound t_n >= S(rho, z0) * C^n", SweepKind.RESIDUAL)
def _residual_lower_bound(rows: Rows, meta: Dict[str, Any], tolerances: Tolerances) -> Tuple[bool, str]:
    S = meta["S"]
    violations = [row["n"] for row in rows if row["widom_inf"] < S * (1 - row["gap_rel"]) * (1 - LOWER_BOUND_SLACK)]
    return not violations, f"violations at n = {violations}" if violations else "no violations"


@register("residual_limit", "Widom factor limit W_(inf,n) -> S(rho, z0)", SweepKind.RESIDUAL)
def _residual_limit(rows: Rows, meta: Dict[str, Any], tolerances: Tolerances) -> Tuple[bool, str]:
    return _limit_verdict(rows[0]["widom_inf"], rows[-1]["widom_inf"], meta["S"], tolerances.sweep_tol)


@register("minimax_duality", "Minimax duality: dual <= t_n <= primal with converged gap", SweepKind.RESIDUAL)
def _minimax_duality(rows: Rows, meta: Dict[str, Any], tolerances: Tolerances) -> Tuple[bool, str]:
    worst = max(row["gap_rel"] for row in rows)
    return worst <= tolerances.lawson_gap, f"max gap_rel = {worst:.3e}"


@register("extreme_points", "Extremal polynomials have at least n + 1 extreme points", SweepKind.RESIDUAL)
def _extreme_points(rows: Rows, meta: Dict[str, Any], tolerances: Tolerances) -> Tuple[bool, str]:
    short = [row["n"] for row in rows if row["extreme_points"] < row["n"] + 1]
    loose = [row["n"] for row in rows if row["extreme_min_ratio"] < EXTREME_VALUE_RATIO]
    passed = not short and not loose
    return passed, f"too few at n = {short}, off-level at n = {loose}" if not passed else "all rows"


@register("opm_weakstar", "Optimal prediction measures converge weak-star to harmonic measure", SweepKind.OPM)
def _opm_weakstar(rows: Rows, meta: Dict[str, Any], tolerances: Tolerances) -> Tuple[bool, str]:
    first, last = rows[0]["ks_distance"], rows[-1]["ks_distance"]
    if first <= 1e-6:
        return last <= 1e-6, f"symmetric case: first {first:.3e}, last {last:.3e}"
    return last <= NON_SZEGO_DECAY * first, f"KS first {first:.3e}, last {last:.3e}"


@register("ahlfors_limit", "Ahlfors closed-form limit |Phi'(z0)| |Phi(z0)|^n A_n -> |Phi(z0)|^2 - 1", SweepKind.AHLFORS)
def _ahlfors_limit(rows: Rows, meta: Dict[str, Any], tolerances: Tolerances) -> Tuple[bool, str]:
    error = rows[-1]["rel_error"]
    return error <= tolerances.sweep_tol, f"final rel_error = {error:.3e}"


@register("widom_continuity", "Widom factors are continuous in z0", SweepKind.CONTINUITY)
def _widom_continuity(rows: Rows, meta: Dict[str, Any], tolerances: Tolerances) -> Tuple[bool, str]:
    deviations = [row["deviation"] for row in rows[1:]]
    if not deviations:
        return False, "empty path"
    shrinking = all(b <= a * (1 + 1e-9) + 1e-14 for a, b in zip(deviations, deviations[1:]))
    reference = rows[0]["widom"]
    relative = deviations[-1] / reference if reference > 0 else math.inf
    passed = shrinking and relative <= CONTINUITY_REL_TOL
    return passed, f"shrinking={shrinking}, final relative deviation {relative:.3e}"

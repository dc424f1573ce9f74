"""Tests for the check registry."""

import pytest

from models.experiment import SweepKind, Tolerances
from services.check_registry import CHECKS, checks_for, evaluate


def verdicts_by_id(kind, rows, meta, tolerances=None):
    return {v.check_id: v for v in evaluate(kind, rows, meta, tolerances or Tolerances())}


class TestRegistry:
    """Test cases for registration and lookup."""

    def test_every_kind_has_checks(self):
        """Each sweep kind contributes at least one check."""
        for kind in SweepKind:
            assert checks_for(kind), kind

    def test_check_ids_are_unique(self):
        """Identifiers are unique across the registry."""
        ids = [check.check_id for check in CHECKS]

        assert len(ids) == len(set(ids))

    def test_empty_table_fails_every_check(self):
        """No rows means no evidence."""
        verdicts = evaluate(SweepKind.WIDOM, [], {"S": 1.0}, Tolerances())

        assert verdicts
        assert all(not v.passed and v.detail == "empty table" for v in verdicts)


class TestWidomChecks:
    """Test cases for the Widom sweep checks."""

    def rows(self, lambdas, widoms, bounds):
        return [
            {"n": n, "lambda": lam, "widom_r": w, "lower_bound": b}
            for n, lam, w, b in zip([2, 4, 6], lambdas, widoms, bounds)
        ]

    def test_passing_sweep(self):
        """Bound respected, factors converging to S, lambda decreasing."""
        rows = self.rows([0.05, 0.01, 0.002], [0.8, 0.76, 0.751], [0.04, 0.009, 0.0019])

        verdicts = verdicts_by_id(SweepKind.WIDOM, rows, {"S": 0.75, "monic": False})

        assert all(v.passed for v in verdicts.values())

    def test_lower_bound_violation(self):
        """Rows below S C^(nr) are reported by degree."""
        rows = self.rows([0.05, 0.001, 0.002], [0.8, 0.76, 0.751], [0.04, 0.009, 0.0019])

        verdict = verdicts_by_id(SweepKind.WIDOM, rows, {"S": 0.75})["widom_lower_bound"]

        assert not verdict.passed
        assert "[4]" in verdict.detail

    def test_limit_outside_tolerance(self):
        """The last Widom factor must be within sweep_tol of S."""
        rows = self.rows([0.05, 0.01, 0.002], [0.9, 0.88, 0.86], [0.04, 0.009, 0.0019])

        verdict = verdicts_by_id(SweepKind.WIDOM, rows, {"S": 0.75})["widom_limit"]

        assert not verdict.passed

    def test_non_szego_limit_requires_decay(self):
        """With S = 0 the factors must at least halve."""
        decaying = self.rows([1e-3, 1e-5, 1e-7], [0.1, 0.02, 0.01], [0, 0, 0])
        flat = self.rows([1e-3, 1e-5, 1e-7], [0.1, 0.09, 0.08], [0, 0, 0])

        assert verdicts_by_id(SweepKind.WIDOM, decaying, {"S": 0.0})["widom_limit"].passed
        assert not verdicts_by_id(SweepKind.WIDOM, flat, {"S": 0.0})["widom_limit"].passed

    def test_monotonicity_skipped_for_monic(self):
        """Monic lambda_n is not asserted to decrease."""
        rows = self.rows([1.0, 2.0, 3.0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.0])

        assert verdicts_by_id(SweepKind.WIDOM, rows, {"S": 1.0, "monic": True})["widom_monotone"].passed
        assert not verdicts_by_id(SweepKind.WIDOM, rows, {"S": 1.0, "monic": False})["widom_monotone"].passed


class TestResidualChecks:
    """Test cases for residual, OPM and Ahlfors checks."""

    def residual_row(self, n, widom, gap=1e-4, extreme=None, ratio=1.0):
        return {
            "n": n,
            "widom_inf": widom,
            "gap_rel": gap,
            "extreme_points": n + 1 if extreme is None else extreme,
            "extreme_min_ratio": ratio,
        }

    def test_passing_residual_sweep(self):
        """W_inf,n above S and converging."""
        rows = [self.residual_row(2, 1.2), self.residual_row(8, 1.01)]

        verdicts = verdicts_by_id(SweepKind.RESIDUAL, rows, {"S": 1.0})

        assert all(v.passed for v in verdicts.values())

    def test_lower_bound_accounts_for_the_gap(self):
        """A primal value below S only fails beyond the duality gap."""
        within = [self.residual_row(2, 0.9995, gap=1e-3)]
        below = [self.residual_row(2, 0.99, gap=1e-3)]

        assert verdicts_by_id(SweepKind.RESIDUAL, within, {"S": 1.0})["residual_lower_bound"].passed
        assert not verdicts_by_id(SweepKind.RESIDUAL, below, {"S": 1.0})["residual_lower_bound"].passed

    def test_duality_gap_above_target(self):
        """Any row above the Lawson gap target fails."""
        rows = [self.residual_row(2, 1.0), self.residual_row(4, 1.0, gap=5e-2)]

        verdict = verdicts_by_id(SweepKind.RESIDUAL, rows, {"S": 1.0}, Tolerances(lawson_gap=1e-2))["minimax_duality"]

        assert not verdict.passed
        assert "5.000e-02" in verdict.detail

    def test_too_few_extreme_points(self):
        """At least n + 1 extreme points at the level t_n."""
        rows = [self.residual_row(3, 1.0, extreme=2), self.residual_row(4, 1.0, ratio=0.9)]

        verdict = verdicts_by_id(SweepKind.RESIDUAL, rows, {"S": 1.0})["extreme_points"]

        assert not verdict.passed
        assert "too few at n = [3]" in verdict.detail
        assert "off-level at n = [4]" in verdict.detail

    @pytest.mark.parametrize(
        "first, last, passed",
        [(0.2, 0.05, True), (0.2, 0.15, False), (0.0, 1e-9, True), (0.0, 1e-3, False)],
    )
    def test_opm_weakstar(self, first, last, passed):
        """KS distances must halve, or stay zero in the symmetric case."""
        rows = [{"n": 2, "ks_distance": first}, {"n": 8, "ks_distance": last}]

        assert verdicts_by_id(SweepKind.OPM, rows, {})["opm_weakstar"].passed is passed

    def test_ahlfors_limit(self):
        """Only the final relative error is compared."""
        rows = [{"n": 1, "rel_error": 1.0}, {"n": 10, "rel_error": 0.01}]

        assert verdicts_by_id(SweepKind.AHLFORS, rows, {})["ahlfors_limit"].passed
        assert not verdicts_by_id(SweepKind.AHLFORS, rows, {}, Tolerances(sweep_tol=1e-3))["ahlfors_limit"].passed


class TestContinuityCheck:
    """Test cases for the continuity probe check."""

    def test_shrinking_deviations(self):
        """Deviations shrink below 1e-3 of the reference."""
        rows = [{"widom": 2.0, "deviation": 0.0}, {"deviation": 0.1}, {"deviation": 0.01}, {"deviation": 1e-4}]

        assert verdicts_by_id(SweepKind.CONTINUITY, rows, {})["widom_continuity"].passed

    def test_growing_deviation_fails(self):
        """A deviation that grows along the path fails."""
        rows = [{"widom": 2.0, "deviation": 0.0}, {"deviation": 0.01}, {"deviation": 0.1}]

        assert not verdicts_by_id(SweepKind.CONTINUITY, rows, {})["widom_continuity"].passed

    def test_reference_only(self):
        """A path without probe points fails."""
        verdict = verdicts_by_id(SweepKind.CONTINUITY, [{"widom": 2.0, "deviation": 0.0}], {})["widom_continuity"]

        assert not verdict.passed
        assert verdict.detail == "empty path"

# ============================================================================
# tests/unit/test_lambert_w.py
# Tests de la fonction W de Lambert
# ============================================================================
"""
Tests des branches réelles W0 et W-1 et de leur dérivée.
"""
import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.lambert_w import (
    INV_E, lambert_w, lambert_w_branch_series, lambert_w_derivative
)
from src.core.models import Branch, DomainError


def _residual(w, x):
    return abs(w * math.exp(w) - x)


class TestLambertWValues:

    def test_principal_at_zero(self):
        """W0(0) = 0"""
        assert lambert_w(Branch.PRINCIPAL, 0.0) == 0.0

    def test_principal_at_e(self):
        """W0(e) = 1"""
        assert lambert_w(Branch.PRINCIPAL, math.e) == pytest.approx(1.0, abs=1e-14)

    def test_branch_point(self):
        """W(-1/e) = -1 sur les deux branches"""
        assert lambert_w(Branch.MINUS_ONE, -INV_E) == -1.0
        assert lambert_w(Branch.PRINCIPAL, -INV_E) == -1.0

    def test_minus_one_at_minus_two(self):
        """W-1(-2 e^-2) = -2"""
        assert lambert_w(Branch.MINUS_ONE, -2.0 * math.exp(-2.0)) == pytest.approx(-2.0, abs=1e-13)

    def test_principal_inverts_t_exp_t(self):
        """W0(t e^t) = t sur une grille de [-0.9, 5]"""
        for t in np.linspace(-0.9, 5.0, 200):
            assert lambert_w(Branch.PRINCIPAL, t * math.exp(t)) == pytest.approx(t, abs=1e-10)

    def test_minus_one_inverts_t_exp_t(self):
        """W-1(t e^t) = t sur une grille de [-30, -1.1]"""
        for t in np.linspace(-30.0, -1.1, 200):
            assert lambert_w(Branch.MINUS_ONE, t * math.exp(t)) == pytest.approx(t, rel=1e-10)


class TestLambertWIdentity:

    def test_identity_on_negative_log_grid(self):
        """|w e^w - x| <= 1e-13 max(1,|x|) sur [-1/e + 1e-12, -1e-300], deux branches"""
        offsets = np.geomspace(1e-12, INV_E - 1e-300, 2500)
        xs = np.concatenate([-INV_E + offsets, -np.geomspace(1e-300, 1e-3, 2500)])
        for branch in (Branch.PRINCIPAL, Branch.MINUS_ONE):
            for x in xs:
                if x >= 0:
                    continue
                w = lambert_w(branch, x)
                assert _residual(w, x) <= 1e-13 * max(1.0, abs(x))

    def test_identity_principal_positive(self):
        """Identité de définition pour W0 jusqu'à 1e6"""
        for x in np.geomspace(1e-300, 1e6, 2000):
            w = lambert_w(Branch.PRINCIPAL, x)
            assert _residual(w, x) <= 1e-13 * max(1.0, abs(x))

    @settings(max_examples=300, deadline=None)
    @given(st.floats(min_value=-0.3678794411714, max_value=1e6, allow_nan=False))
    def test_identity_property(self, x):
        """Identité de définition sur des arguments quelconques de W0"""
        w = lambert_w(Branch.PRINCIPAL, x)
        assert w >= -1.0
        assert _residual(w, x) <= 1e-13 * max(1.0, abs(x))

    def test_branch_ordering(self):
        """W-1(x) < -1 < W0(x) < 0 sur (-1/e, 0)"""
        for x in np.linspace(-INV_E + 1e-6, -1e-6, 300):
            assert lambert_w(Branch.MINUS_ONE, x) < -1.0 < lambert_w(Branch.PRINCIPAL, x) < 0.0

    def test_monotonicity(self):
        """W0 croissante, W-1 décroissante"""
        xs = np.linspace(-INV_E + 1e-9, -1e-9, 500)
        principal = [lambert_w(Branch.PRINCIPAL, x) for x in xs]
        minus_one = [lambert_w(Branch.MINUS_ONE, x) for x in xs]
        assert all(a < b for a, b in zip(principal, principal[1:]))
        assert all(a > b for a, b in zip(minus_one, minus_one[1:]))


class TestNearBranchPoint:

    def test_no_warning_near_branch_point(self, caplog):
        """Près de -1/e : résidu <= 1e-13 sans avertissement de non-convergence"""
        with caplog.at_level(logging.WARNING, logger="src.core.lambert_w"):
            for offset in np.geomspace(1e-16, 1e-2, 300):
                x = -INV_E + offset
                for branch in (Branch.PRINCIPAL, Branch.MINUS_ONE):
                    assert _residual(lambert_w(branch, x), x) <= 1e-13
        assert [r.getMessage() for r in caplog.records if r.levelno >= logging.WARNING] == []

    def test_branches_separate(self):
        """W0 > -1 > W-1 dès que x > -1/e"""
        for offset in np.geomspace(1e-12, 1e-2, 50):
            x = -INV_E + offset
            assert lambert_w(Branch.MINUS_ONE, x) < -1.0 < lambert_w(Branch.PRINCIPAL, x)


class TestLambertWDomain:

    def test_slop_below_branch_point_is_clamped(self):
        """Un argument à moins de 1e-15 sous -1/e est ramené au point de branchement"""
        assert lambert_w(Branch.PRINCIPAL, -INV_E - 5e-16) == -1.0
        assert lambert_w(Branch.MINUS_ONE, -INV_E - 5e-16) == -1.0

    @pytest.mark.parametrize("branch,x", [
        (Branch.PRINCIPAL, -1.0),
        (Branch.PRINCIPAL, -INV_E - 1e-10),
        (Branch.MINUS_ONE, 0.0),
        (Branch.MINUS_ONE, 0.5),
        (Branch.PRINCIPAL, math.nan),
        (Branch.PRINCIPAL, math.inf),
    ])
    def test_outside_domain(self, branch, x):
        """Arguments hors domaine refusés"""
        with pytest.raises(DomainError):
            lambert_w(branch, x)


class TestLambertWDerivative:

    def test_derivative_at_e(self):
        """W0'(e) = 1/(2e)"""
        assert lambert_w_derivative(Branch.PRINCIPAL, math.e) == pytest.approx(1.0 / (2.0 * math.e), rel=1e-12)

    def test_derivative_near_zero(self):
        """W0'(x) -> 1 quand x -> 0"""
        assert lambert_w_derivative(Branch.PRINCIPAL, 1e-8) == pytest.approx(1.0, abs=1e-7)

    @pytest.mark.parametrize("branch,x", [
        (Branch.MINUS_ONE, -0.1),
        (Branch.MINUS_ONE, -0.3),
        (Branch.PRINCIPAL, -0.2),
        (Branch.PRINCIPAL, 10.0),
    ])
    def test_matches_finite_differences(self, branch, x):
        """Accord avec les différences finies centrées, pas 1e-6"""
        h = 1e-6
        estimate = (lambert_w(branch, x + h) - lambert_w(branch, x - h)) / (2.0 * h)
        assert lambert_w_derivative(branch, x) == pytest.approx(estimate, rel=1e-6)

    @pytest.mark.parametrize("x", [0.0, -INV_E])
    def test_singular_points(self, x):
        """Dérivée refusée en 0 et en -1/e"""
        with pytest.raises(DomainError):
            lambert_w_derivative(Branch.PRINCIPAL, x)


class TestBranchSeries:

    @pytest.mark.parametrize("eps", [1e-8, 1e-6, 1e-4, 1e-3])
    def test_series_residual(self, eps):
        """Reste du développement en sqrt(eps) d'ordre eps^2"""
        x = -math.exp(-(1.0 + 2.0 * eps))
        for branch in (Branch.PRINCIPAL, Branch.MINUS_ONE):
            residual = abs(lambert_w(branch, x) - lambert_w_branch_series(branch, eps))
            assert residual <= eps * eps + 1e-11

    def test_series_at_zero(self):
        """Développement exact en eps = 0"""
        assert lambert_w_branch_series(Branch.PRINCIPAL, 0.0) == -1.0

    def test_negative_eps(self):
        """eps < 0 refusé"""
        with pytest.raises(DomainError):
            lambert_w_branch_series(Branch.MINUS_ONE, -1e-3)

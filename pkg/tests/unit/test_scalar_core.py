# ============================================================================
# tests/unit/test_scalar_core.py
# Tests du calcul scalaire
# ============================================================================
"""
Tests de f(x) = x - log x, des racines w1/w2 et des fonctions dérivées.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core import bounds
from src.core.models import Branch, DomainError, EpsilonBudget, NumericalError, RootSide
from src.core.scalar_core import (
    delta_inf, delta_sup, delta_sup_prime, delta_sup_second, f, f_l, f_l_prime,
    f_prime, f_product_identity_check, f_r, f_r_prime, g_l, g_l_prime, g_r,
    g_r_prime, inverse_f, log_w1, root_oracle, scalar_inf_map, scalar_sup_map, w1,
    w1_prime, w2, w2_prime
)


def _central(func, t, h=1e-6):
    return (func(t + h) - func(t - h)) / (2.0 * h)


class TestF:

    def test_minimum(self):
        """f(1) = 1 est le minimum"""
        assert f(1.0) == 1.0
        assert f(math.e) == pytest.approx(math.e - 1.0)
        for x in np.geomspace(1e-6, 1e6, 100):
            assert f(x) >= 1.0

    @pytest.mark.parametrize("x", [0.0, -1.0, math.nan])
    def test_domain(self, x):
        """f n'est définie que pour x > 0"""
        with pytest.raises(DomainError):
            f(x)

    def test_reciprocal_is_smaller(self):
        """f(1/x) < f(x) pour x > 1"""
        for x in np.geomspace(1.01, 1e6, 100):
            assert f(1.0 / x) < f(x)

    def test_prime(self):
        """f'(x) = 1 - 1/x"""
        assert f_prime(2.0) == 0.5
        assert f_prime(1.0) == 0.0

    def test_helpers(self):
        """f_l(x) = f(1 - x) - 1 et f_r(x) = f(x + 1) - 1"""
        for x in (0.0, 0.1, 0.5, 0.9):
            assert f_l(x) == pytest.approx(f(1.0 - x) - 1.0, abs=1e-15)
        for x in (0.0, 0.1, 2.0, 50.0):
            assert f_r(x) == pytest.approx(f(x + 1.0) - 1.0, abs=1e-13)

    def test_helper_derivatives(self):
        """Dérivées de f_l et f_r contre différences finies"""
        for x in (0.2, 0.5, 0.8):
            assert f_l_prime(x) == pytest.approx(_central(f_l, x), rel=1e-6)
        for x in (0.2, 3.0, 40.0):
            assert f_r_prime(x) == pytest.approx(_central(f_r, x), rel=1e-6)

    def test_helper_domains(self):
        """f_l exige [0, 1), f_r exige [0, +inf)"""
        with pytest.raises(DomainError):
            f_l(1.0)
        with pytest.raises(DomainError):
            f_r(-0.1)


class TestRoots:

    def test_at_zero(self):
        """w1(0) = w2(0) = 1"""
        assert w1(0.0) == 1.0
        assert w2(0.0) == 1.0

    def test_roots_solve_f(self):
        """f(w1(t)) = f(w2(t)) = 1 + t"""
        for t in np.linspace(0.01, 50.0, 200):
            lower, upper = w1(t), w2(t)
            assert 0.0 < lower < 1.0 < upper
            assert f(lower) == pytest.approx(1.0 + t, rel=1e-12)
            assert f(upper) == pytest.approx(1.0 + t, rel=1e-12)

    def test_oracle_equivalence(self):
        """w1/w2 par W de Lambert et par dichotomie pure, 1000 valeurs de t dans [0, 50]"""
        for t in np.linspace(0.0, 50.0, 1000):
            assert abs(w1(t) - root_oracle(t, RootSide.LOWER)) <= 1e-10
            assert w2(t) == pytest.approx(root_oracle(t, RootSide.UPPER), rel=1e-10)

    def test_oracle_residual(self):
        """La dichotomie résout f(x) = 1 + t à 1e-13 près en relatif"""
        for t in np.linspace(0.1, 50.0, 50):
            for side in (RootSide.LOWER, RootSide.UPPER):
                x = root_oracle(t, side)
                assert abs(f(x) - (1.0 + t)) <= 1e-13 * (1.0 + t)

    def test_huge_budget_log_space(self):
        """w1 en espace logarithmique au-delà du seuil, w2 par dichotomie"""
        lower = w1(700.0)
        assert 0.0 < lower < 1e-300
        assert math.log(lower) == pytest.approx(-701.0, rel=1e-12)
        assert f(w2(1000.0)) == pytest.approx(1001.0, rel=1e-12)

    def test_underflow_raises(self):
        """w1 qui sous-dépasse lève NumericalError"""
        with pytest.raises(NumericalError):
            w1(800.0)

    @pytest.mark.parametrize("t", [-1e-3, math.nan, math.inf])
    def test_invalid_budget(self, t):
        """Budgets négatifs ou non finis refusés"""
        with pytest.raises(DomainError):
            w1(t)
        with pytest.raises(DomainError):
            w2(t)

    def test_epsilon_budget_accepted(self):
        """Un EpsilonBudget vaut son flottant"""
        assert w1(EpsilonBudget(0.5)) == w1(0.5)
        assert w2(EpsilonBudget(0.5)) == w2(0.5)

    def test_derivatives(self):
        """w1' et w2' contre différences finies"""
        for t in (0.05, 0.5, 3.0, 20.0):
            assert w1_prime(t) == pytest.approx(_central(w1, t), rel=1e-6)
            assert w2_prime(t) == pytest.approx(_central(w2, t), rel=1e-6)
            assert w1_prime(t) < 0 < w2_prime(t)

    def test_derivatives_singular_at_zero(self):
        """Dérivées refusées en t = 0"""
        with pytest.raises(DomainError):
            w1_prime(0.0)
        with pytest.raises(DomainError):
            w2_prime(0.0)

    def test_inverse_f(self):
        """f^-1 sur chaque branche"""
        assert inverse_f(2.5, Branch.PRINCIPAL) == w1(1.5)
        assert inverse_f(2.5, Branch.MINUS_ONE) == w2(1.5)
        with pytest.raises(DomainError):
            inverse_f(0.5, Branch.PRINCIPAL)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=0.0, max_value=600.0, allow_nan=False))
    def test_root_ordering_property(self, t):
        """w1(t) <= 1 <= w2(t) pour tout t >= 0"""
        assert w1(t) <= 1.0 <= w2(t)


class TestTinyBudgetRoots:

    GRID = np.geomspace(1e-14, 1e-6, 200)

    def test_log_root_matches_series(self):
        """log w1(t) = -q - q^2/6 - q^3/36 + O(q^4), q = sqrt(2t)"""
        for t in np.geomspace(1e-14, 1e-8, 50):
            q = math.sqrt(2.0 * t)
            assert log_w1(t) == pytest.approx(-q - q * q / 6.0 - q ** 3 / 36.0, rel=1e-12)

    def test_agree_with_oracle(self):
        """w1 et w2 - 1 contre la dichotomie"""
        for t in self.GRID:
            assert w1(t) == pytest.approx(root_oracle(t, RootSide.LOWER), abs=4e-16)
            assert g_r(t) == pytest.approx(root_oracle(t, RootSide.UPPER) - 1.0, abs=4e-16)

    def test_log_root_decreasing(self):
        """log w1 et w2 - 1 strictement monotones"""
        lows = [log_w1(t) for t in self.GRID]
        highs = [g_r(t) for t in self.GRID]
        assert all(a > b for a, b in zip(lows, lows[1:]))
        assert all(a < b for a, b in zip(highs, highs[1:]))

    def test_excess_solves_equation(self):
        """f_r(w2 - 1) = t en relatif"""
        for t in self.GRID:
            assert f_r(g_r(t)) == pytest.approx(t, rel=1e-13)


class TestReciprocalInequalities:

    def test_reciprocal_of_roots(self):
        """f(w1) <= f(1/w1) et f(1/w2) <= f(w2)"""
        for t in np.linspace(0.01, 30.0, 100):
            assert f(w1(t)) <= f(1.0 / w1(t)) + 1e-12
            assert f(1.0 / w2(t)) <= f(w2(t)) + 1e-12

    def test_sup_and_inf_of_reciprocal(self, rng):
        """f(1/x) <= S(t) sur [w1, w2] et f(1/x) >= I(t) hors de (w1, w2)"""
        for t in np.linspace(0.0, 10.0, 50):
            lower, upper = w1(t), w2(t)
            for x in rng.uniform(lower, upper, size=5):
                assert f(1.0 / x) <= scalar_sup_map(t) * (1.0 + 1e-12)
            for x in (upper * 1.5, upper * 10.0, lower * 0.5):
                assert f(1.0 / x) >= scalar_inf_map(t) * (1.0 - 1e-12)

    def test_derivative_comparison(self):
        """f'(w2) <= -f'(1/w2)"""
        for t in np.linspace(0.0, 20.0, 50):
            upper = w2(t)
            assert f_prime(upper) <= -f_prime(1.0 / upper) + 1e-12

    @pytest.mark.parametrize("side", [RootSide.UPPER, RootSide.LOWER])
    def test_product_identity(self, side):
        """f(w(t1) w(t2)) = t1 + t2 + 2 + w(t1) w(t2) - w(t1) - w(t2)"""
        for t1, t2 in [(0.0, 0.0), (0.3, 1.7), (2.0, 5.0), (0.01, 0.0)]:
            left, right = f_product_identity_check(t1, t2, side)
            assert left == pytest.approx(right, rel=1e-12)

    def test_product_bound(self, rng):
        """f(xy) <= f(w2(ex) w2(ey)) pour x, y dans les intervalles [w1, w2]"""
        for ex, ey in [(0.1, 0.1), (0.5, 2.0), (3.0, 0.0), (1.0, 4.0)]:
            bound = f(w2(ex) * w2(ey))
            for _ in range(20):
                x = rng.uniform(w1(ex), w2(ex))
                y = rng.uniform(w1(ey), w2(ey))
                assert f(x * y) <= bound * (1.0 + 1e-12)


class TestAuxiliaryFunctions:

    def test_gl_below_gr(self):
        """g_l(e) = 1 - w1 <= g_r(e) = w2 - 1"""
        for e in np.linspace(0.0, 50.0, 200):
            assert g_l(e) <= g_r(e) + 1e-12

    def test_g_derivatives(self):
        """g_l' et g_r' contre différences finies"""
        for e in (0.05, 1.0, 3.0):
            assert g_l_prime(e) == pytest.approx(_central(g_l, e), rel=1e-6)
            assert g_r_prime(e) == pytest.approx(_central(g_r, e), rel=1e-6)

    def test_g_derivatives_at_zero(self):
        """g_r'(0) = +inf ; g_l'(0) refusée"""
        assert g_r_prime(0.0) == math.inf
        with pytest.raises(DomainError):
            g_l_prime(0.0)

    def test_delta_sup(self):
        """Delta nulle en 0, croissante, de dérivées exactes"""
        assert delta_sup(0.0) == 0.0
        assert delta_inf(0.0) == 0.0
        for e in (0.1, 1.0, 4.0):
            assert delta_sup(e) > 0
            assert delta_sup_prime(e) == pytest.approx(_central(delta_sup, e), rel=1e-6)
            assert delta_sup_second(e) == pytest.approx(_central(delta_sup_prime, e), rel=1e-5)
            assert delta_sup_second(e) > 0

    def test_delta_convexity(self):
        """Delta(s e) <= s Delta(e) pour s dans [0, 1]"""
        for e in (0.5, 2.0, 5.0):
            for s in np.linspace(0.0, 1.0, 11):
                assert delta_sup(s * e) <= s * delta_sup(e) + 1e-12
                assert delta_inf(s * e) <= s * delta_inf(e) + 1e-12

    def test_sup_map_matches_bound(self):
        """S(2 eps) = 1 + 2 sup_reverse_kl(eps)"""
        for eps in (1e-3, 0.5, 3.0):
            assert scalar_sup_map(2.0 * eps) == pytest.approx(1.0 + 2.0 * bounds.sup_reverse_kl(eps).value, rel=1e-12)

# ============================================================================
# tests/unit/test_extremal.py
# Tests des paires extrémales
# ============================================================================
"""
Tests d'atteinte des bornes, de plongement dans un repère et de la sonde
de perturbation.
"""
import numpy as np
import pytest

from src.core import bounds
from src.core.extremal import (
    embed_in_frame, extremal_inf_pair, extremal_sup_pair, perturbed_pair
)
from src.core.gaussian import kl
from src.core.generators import FrameGenerator
from src.core.models import (
    AffineMap, DimensionMismatchError, DomainError, IllConditionedError, PairKind
)

BUDGETS = (1e-4, 1e-2, 0.5, 2.0, 10.0)
DIMS = (1, 2, 10, 100)


class TestExtremalSup:

    @pytest.mark.parametrize("eps", BUDGETS)
    def test_attains_supremum(self, eps):
        """KL directe = eps et KL inverse = sup(eps), indépendamment de n"""
        expected = bounds.sup_reverse_kl(eps).value
        reverse_values = []
        for n in DIMS:
            pair = extremal_sup_pair(eps, n)
            assert kl(pair.g1, pair.g2) == pytest.approx(eps, rel=1e-9)
            reverse = kl(pair.g2, pair.g1)
            assert reverse == pytest.approx(expected, rel=1e-9)
            reverse_values.append(reverse)
        assert max(reverse_values) - min(reverse_values) <= 1e-9 * expected

    def test_canonical_form(self):
        """g2 = N(0, I), moyennes égales, une seule valeur propre différente de 1"""
        pair = extremal_sup_pair(0.5, 4)
        assert pair.kind == PairKind.SUP_ATTAINER
        assert np.array_equal(pair.g2.cov, np.eye(4))
        assert np.array_equal(pair.g1.mean, pair.g2.mean)
        diagonal = np.diag(pair.g1.cov)
        assert diagonal[0] == pytest.approx(bounds.sup_reverse_kl(0.5).extremal_eigenvalue)
        assert np.all(diagonal[1:] == 1.0)

    def test_documents(self):
        """Export en deux documents JSON"""
        documents = extremal_sup_pair(0.5, 2).to_documents()
        assert len(documents) == 2
        assert set(documents[0]) == {'mean', 'cov'}

    @pytest.mark.parametrize("eps,n", [(0.0, 2), (-1.0, 2), (0.5, 0)])
    def test_invalid(self, eps, n):
        """Budget nul ou négatif, dimension nulle refusés"""
        with pytest.raises(DomainError):
            extremal_sup_pair(eps, n)


class TestExtremalInf:

    @pytest.mark.parametrize("m", BUDGETS)
    def test_attains_infimum(self, m):
        """KL directe = M et KL inverse = inf(M), indépendamment de n"""
        expected = bounds.inf_reverse_kl(m).value
        for n in DIMS:
            pair = extremal_inf_pair(m, n)
            assert pair.kind == PairKind.INF_ATTAINER
            assert kl(pair.g1, pair.g2) == pytest.approx(m, rel=1e-9)
            assert kl(pair.g2, pair.g1) == pytest.approx(expected, rel=1e-9)


class TestEmbedding:

    @pytest.mark.parametrize("seed", [0, 7, 42])
    def test_frame_preserves_divergences(self, seed):
        """Les deux KL sont conservées dans un repère aléatoire"""
        pair = extremal_sup_pair(0.5, 5)
        moved = embed_in_frame(pair, FrameGenerator.random_affine_map(5, seed))
        assert kl(moved.g1, moved.g2) == pytest.approx(0.5, rel=1e-9)
        assert kl(moved.g2, moved.g1) == pytest.approx(bounds.sup_reverse_kl(0.5).value, rel=1e-9)
        assert not np.allclose(moved.g2.cov, np.eye(5))

    def test_same_seed_same_pair(self):
        """Même graine de repère, même paire"""
        pair = extremal_inf_pair(1.0, 3)
        a = embed_in_frame(pair, FrameGenerator.random_affine_map(3, 7))
        b = embed_in_frame(pair, FrameGenerator.random_affine_map(3, 7))
        assert np.array_equal(a.g1.cov, b.g1.cov)
        assert np.array_equal(a.g2.mean, b.g2.mean)

    def test_ill_conditioned_frame(self):
        """Repère de conditionnement > 1e8 refusé"""
        pair = extremal_sup_pair(0.5, 2)
        transform = AffineMap(linear=np.diag([1e5, 1e-5]), offset=np.zeros(2))
        with pytest.raises(IllConditionedError):
            embed_in_frame(pair, transform)

    def test_dimension_mismatch(self):
        """Repère de mauvaise dimension refusé"""
        pair = extremal_sup_pair(0.5, 2)
        with pytest.raises(DimensionMismatchError):
            embed_in_frame(pair, FrameGenerator.random_affine_map(3, 0))


class TestPerturbation:

    @pytest.mark.parametrize("n", [1, 2, 6])
    @pytest.mark.parametrize("delta", [0.3, -0.3, 0.05])
    def test_sup_perturbation_decreases_reverse(self, n, delta):
        """Même KL directe, KL inverse strictement sous le supremum"""
        pair = perturbed_pair(PairKind.SUP_ATTAINER, 0.5, n, delta)
        assert kl(pair.g1, pair.g2) == pytest.approx(0.5, rel=1e-9)
        assert kl(pair.g2, pair.g1) < bounds.sup_reverse_kl(0.5).value

    @pytest.mark.parametrize("n", [1, 2, 6])
    @pytest.mark.parametrize("delta", [0.3, -0.3])
    def test_inf_perturbation_increases_reverse(self, n, delta):
        """Même KL directe, KL inverse strictement au-dessus de l'infimum"""
        pair = perturbed_pair(PairKind.INF_ATTAINER, 1.0, n, delta)
        assert kl(pair.g1, pair.g2) == pytest.approx(1.0, rel=1e-9)
        assert kl(pair.g2, pair.g1) > bounds.inf_reverse_kl(1.0).value

    def test_one_dimensional_uses_mean(self):
        """En dimension 1 la perturbation passe par la moyenne"""
        pair = perturbed_pair(PairKind.SUP_ATTAINER, 0.5, 1, 0.25)
        assert pair.g1.mean[0] == pytest.approx(np.sqrt(0.25))

    @pytest.mark.parametrize("delta", [0.0, 1.0, -1.0, np.nan])
    def test_invalid_delta(self, delta):
        """0 < |delta| < 1 exigé"""
        with pytest.raises(DomainError):
            perturbed_pair(PairKind.SUP_ATTAINER, 0.5, 2, delta)

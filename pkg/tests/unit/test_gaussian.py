# ============================================================================
# tests/unit/test_gaussian.py
# Tests des gaussiennes et de la divergence KL
# ============================================================================
"""
Tests de construction, décomposition, changement de repère et KL en forme close.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.gaussian import (
    apply_affine, kl, kl_to_standard, make_gaussian, spectral, standard_gaussian,
    whitening_map
)
from src.core.generators import FrameGenerator, GaussianGenerator
from src.core.models import (
    AffineMap, DimensionMismatchError, IllConditionedError, ValidationError
)


class TestMakeGaussian:

    def test_valid(self, sample_gaussian):
        """Gaussienne valide : Cholesky inférieur reconstruisant cov"""
        assert sample_gaussian.dim == 2
        chol = sample_gaussian.chol
        assert np.allclose(chol @ chol.T, sample_gaussian.cov)
        assert chol[0, 1] == 0.0

    def test_read_only(self, sample_gaussian):
        """Les tableaux stockés ne sont pas modifiables"""
        with pytest.raises(ValueError):
            sample_gaussian.mean[0] = 3.0

    def test_symmetrization_within_tolerance(self):
        """Asymétrie de l'ordre de 1e-13 absorbée"""
        g = make_gaussian([0.0, 0.0], [[1.0, 0.5], [0.5 + 1e-13, 1.0]])
        assert np.array_equal(g.cov, g.cov.T)

    def test_asymmetric_rejected(self):
        """Covariance non symétrique refusée"""
        with pytest.raises(ValidationError):
            make_gaussian([0.0, 0.0], [[1.0, 0.5], [0.4, 1.0]])

    def test_not_positive_definite(self):
        """Covariance indéfinie refusée"""
        with pytest.raises(ValidationError):
            make_gaussian([0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])

    def test_dimension_mismatch(self):
        """mean et cov de tailles différentes"""
        with pytest.raises(DimensionMismatchError):
            make_gaussian([0.0, 0.0, 0.0], np.eye(2))

    def test_ill_conditioned(self):
        """Conditionnement au-delà de 1e12 refusé"""
        with pytest.raises(IllConditionedError):
            make_gaussian([0.0, 0.0], np.diag([1.0, 1e-13]))

    def test_non_finite(self):
        """NaN refusé"""
        with pytest.raises(ValidationError):
            make_gaussian([math.nan, 0.0], np.eye(2))


class TestSpectralAndWhitening:

    def test_spectral_reconstructs(self, sample_gaussian):
        """P diag(lambda) P^T = cov, valeurs propres décroissantes"""
        spectrum = spectral(sample_gaussian)
        assert np.all(np.diff(spectrum.eigenvalues) <= 0)
        assert np.allclose(spectrum.reconstruct(), sample_gaussian.cov, atol=1e-12)
        assert np.allclose(spectrum.frame.T @ spectrum.frame, np.eye(2), atol=1e-12)

    def test_whitening_sends_to_standard(self, rng):
        """L'image par la carte de blanchiment est N(0, I)"""
        for dim in (1, 3, 8):
            g = GaussianGenerator.random_gaussian(dim, rng)
            white = apply_affine(whitening_map(g), g)
            assert np.allclose(white.mean, 0.0, atol=1e-10)
            assert np.allclose(white.cov, np.eye(dim), atol=1e-10)

    def test_affine_dimension_mismatch(self, sample_gaussian):
        """Application de mauvaise dimension refusée"""
        with pytest.raises(DimensionMismatchError):
            apply_affine(AffineMap(linear=np.eye(3), offset=np.zeros(3)), sample_gaussian)


class TestKL:

    def test_identical_is_zero(self, sample_gaussian):
        """KL(g||g) = 0"""
        assert kl(sample_gaussian, sample_gaussian) == 0.0

    def test_unit_shift(self):
        """KL(N(0,1)||N(1,1)) = 1/2 dans les deux sens"""
        g1 = make_gaussian([0.0], [[1.0]])
        g2 = make_gaussian([1.0], [[1.0]])
        assert kl(g1, g2) == pytest.approx(0.5, abs=1e-15)
        assert kl(g2, g1) == pytest.approx(0.5, abs=1e-15)

    def test_variance_ratio(self):
        """KL(N(0,s)||N(0,1)) = (s - log s - 1)/2"""
        for s in (0.1, 0.5, 2.0, 10.0):
            g = make_gaussian([0.0], [[s]])
            assert kl(g, standard_gaussian(1)) == pytest.approx(0.5 * (s - math.log(s) - 1.0), rel=1e-13)

    def test_matches_direct_formula(self, rng):
        """Forme de Cholesky contre la formule avec inverse et déterminants"""
        for dim in (2, 5):
            g1 = GaussianGenerator.random_gaussian(dim, rng)
            g2 = GaussianGenerator.random_gaussian(dim, rng)
            inv2 = np.linalg.inv(g2.cov)
            diff = g2.mean - g1.mean
            expected = 0.5 * (
                np.log(np.linalg.det(g2.cov) / np.linalg.det(g1.cov))
                + np.trace(inv2 @ g1.cov) + diff @ inv2 @ diff - dim
            )
            assert kl(g1, g2) == pytest.approx(expected, rel=1e-10)

    def test_to_standard(self, sample_gaussian, standard_2d):
        """kl_to_standard = kl(g, N(0, I))"""
        assert kl_to_standard(sample_gaussian) == pytest.approx(kl(sample_gaussian, standard_2d), rel=1e-12)

    def test_dimension_mismatch(self, sample_gaussian):
        """Dimensions différentes refusées"""
        with pytest.raises(DimensionMismatchError):
            kl(sample_gaussian, standard_gaussian(3))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_nonnegative_and_affine_invariant(self, dim, seed):
        """KL >= 0 et invariante par une application affine commune"""
        rng = np.random.default_rng(seed)
        g1 = GaussianGenerator.random_gaussian(dim, rng)
        g2 = GaussianGenerator.random_gaussian(dim, rng)
        transform = FrameGenerator.random_affine_map(dim, seed)
        before = kl(g1, g2)
        after = kl(apply_affine(transform, g1), apply_affine(transform, g2))
        assert before >= 0.0
        assert abs(after - before) <= 1e-8 * (1.0 + before)

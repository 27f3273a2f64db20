# ============================================================================
# Générateurs aléatoires reproductibles
# ============================================================================
"""
Générateurs pour les campagnes de vérification : graines par essai,
matrices SPD, gaussiennes et repères affines aléatoires.
Logique pure, entièrement déterminée par les graines.
"""
from typing import Tuple

import numpy as np
import scipy.linalg as la

from .gaussian import make_gaussian
from .models import AffineMap, Gaussian
from .validators import DimensionValidator, RangeValidator

LOG_EIG_LIMITS = (-6.0, 6.0)
DEFAULT_LOG_EIG_RANGE = (-1.5, 1.5)


class SeedSplitter:
    """Dérive les graines des essais à partir d'une graine maîtresse"""

    @staticmethod
    def trial_seed(master_seed: int, cell_index: int, trial_index: int) -> int:
        """
        Graine 64 bits de l'essai (cellule, indice), indépendante de l'ordre
        d'exécution.
        """
        sequence = np.random.SeedSequence(entropy=master_seed, spawn_key=(cell_index, trial_index))
        return int(sequence.generate_state(1, np.uint64)[0])

    @staticmethod
    def rng(seed: int) -> np.random.Generator:
        """Générateur numpy associé à une graine d'essai"""
        return np.random.default_rng(seed)


class GaussianGenerator:
    """Génère des covariances et des gaussiennes aléatoires"""

    @staticmethod
    def random_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
        """Repère orthogonal : QR d'une matrice gaussienne, diagonale de R rendue positive"""
        q, r = la.qr(rng.standard_normal((dim, dim)))
        signs = np.sign(np.diag(r))
        signs[signs == 0] = 1.0
        return q * signs

    @staticmethod
    def spd_from_rng(dim: int, rng: np.random.Generator,
                     log_eig_range: Tuple[float, float] = DEFAULT_LOG_EIG_RANGE) -> np.ndarray:
        """Matrice SPD aux valeurs propres log-uniformes dans exp(log_eig_range)"""
        DimensionValidator.validate_or_raise(dim, "dim")
        low, high = log_eig_range
        RangeValidator.validate_or_raise(low, high, "log_eig_range", LOG_EIG_LIMITS)
        eigenvalues = np.exp(rng.uniform(low, high, size=dim))
        frame = GaussianGenerator.random_orthogonal(dim, rng)
        matrix = (frame * eigenvalues) @ frame.T
        return 0.5 * (matrix + matrix.T)

    @staticmethod
    def random_spd(dim: int, seed: int,
                   log_eig_range: Tuple[float, float] = DEFAULT_LOG_EIG_RANGE) -> np.ndarray:
        """
        Matrice SPD déterministe pour (dim, seed, log_eig_range).

        Raises:
            ValidationError: Si la plage sort de [-6, 6] ou si dim < 1
        """
        return GaussianGenerator.spd_from_rng(dim, np.random.default_rng(seed), log_eig_range)

    @staticmethod
    def random_gaussian(dim: int, rng: np.random.Generator,
                        log_eig_range: Tuple[float, float] = DEFAULT_LOG_EIG_RANGE,
                        mean_scale: float = 1.0) -> Gaussian:
        """Gaussienne de moyenne N(0, mean_scale^2 I) et de covariance SPD aléatoire"""
        cov = GaussianGenerator.spd_from_rng(dim, rng, log_eig_range)
        mean = mean_scale * rng.standard_normal(dim)
        return make_gaussian(mean, cov)


class FrameGenerator:
    """Génère des changements de repère affines bien conditionnés"""

    @staticmethod
    def random_affine_map(dim: int, seed: int, log_scale: float = 1.0,
                          offset_scale: float = 1.0) -> AffineMap:
        """
        x -> U diag(s) V^T x + b, avec log s uniforme dans [-log_scale, log_scale] ;
        le conditionnement reste inférieur à exp(2 log_scale).
        """
        DimensionValidator.validate_or_raise(dim, "dim")
        rng = np.random.default_rng(seed)
        left = GaussianGenerator.random_orthogonal(dim, rng)
        right = GaussianGenerator.random_orthogonal(dim, rng)
        scales = np.exp(rng.uniform(-log_scale, log_scale, size=dim))
        linear = (left * scales) @ right.T
        offset = offset_scale * rng.standard_normal(dim)
        return AffineMap(linear=linear, offset=offset)

    @staticmethod
    def random_rotation(dim: int, seed: int) -> AffineMap:
        """Rotation (ou réflexion) aléatoire sans translation"""
        DimensionValidator.validate_or_raise(dim, "dim")
        rng = np.random.default_rng(seed)
        return AffineMap(linear=GaussianGenerator.random_orthogonal(dim, rng), offset=np.zeros(dim))

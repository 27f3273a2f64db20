# ============================================================================
# Gaussiennes multivariées et divergence KL
# ============================================================================
"""
Construction validée des gaussiennes, factorisation spectrale, applications
affines (blanchiment, changement de repère) et divergence KL en forme close.

La factorisation de Cholesky sert d'oracle de définie-positivité ; la
décomposition propre n'est calculée que lorsque valeurs propres ou repère
sont nécessaires.
"""
import logging
import math

import numpy as np
import scipy.linalg as la

from .models import (
    AffineMap, DimensionMismatchError, Gaussian, IllConditionedError,
    NumericalError, Spectrum, ValidationError
)
from .validators import GaussianValidator

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e12
KL_CLAMP = 1e-10


def make_gaussian(mean, cov) -> Gaussian:
    """
    Crée une gaussienne validée.

    La covariance est symétrisée par (C + C^T)/2 si son asymétrie relative
    ne dépasse pas 1e-12.

    Raises:
        DimensionMismatchError: Si mean et cov n'ont pas la même dimension
        ValidationError: Covariance non symétrique, non finie ou non définie positive
        IllConditionedError: Conditionnement supérieur à 1e12
    """
    GaussianValidator.validate_or_raise(mean, cov)
    mean = np.asarray(mean, dtype=float)
    cov = np.asarray(cov, dtype=float)
    cov = 0.5 * (cov + cov.T)

    try:
        chol = la.cholesky(cov, lower=True)
    except la.LinAlgError:
        raise ValidationError("La covariance n'est pas définie positive (échec de Cholesky)")

    eigenvalues = la.eigvalsh(cov)
    if eigenvalues[0] <= 0:
        raise ValidationError("La covariance n'est pas définie positive")
    condition = eigenvalues[-1] / eigenvalues[0]
    if condition > MAX_CONDITION:
        raise IllConditionedError(
            f"Covariance mal conditionnée : {condition:.3e} > {MAX_CONDITION:.0e}"
        )
    return Gaussian(mean=mean, cov=cov, chol=chol)


def standard_gaussian(dim: int) -> Gaussian:
    """N(0, I_n)"""
    return make_gaussian(np.zeros(dim), np.eye(dim))


def spectral(g: Gaussian) -> Spectrum:
    """
    cov = P diag(lambda) P^T, valeurs propres décroissantes.

    Chaque vecteur propre est orienté pour que sa composante de plus grande
    valeur absolue soit positive.
    """
    try:
        eigenvalues, frame = la.eigh(g.cov)
    except la.LinAlgError as e:
        raise NumericalError(f"Décomposition propre impossible : {e}")
    eigenvalues = eigenvalues[::-1]
    frame = frame[:, ::-1]
    if eigenvalues[-1] <= 0:
        raise NumericalError("Valeur propre non positive dans une covariance validée")

    pivots = np.argmax(np.abs(frame), axis=0)
    signs = np.sign(frame[pivots, np.arange(frame.shape[1])])
    signs[signs == 0] = 1.0
    return Spectrum(frame=frame * signs, eigenvalues=eigenvalues)


def whitening_map(g: Gaussian) -> AffineMap:
    """T(x) = B^-1 (x - mean) avec B = P D^1/2, qui envoie g sur N(0, I)"""
    spectrum = spectral(g)
    linear = spectrum.frame.T / np.sqrt(spectrum.eigenvalues)[:, None]
    return AffineMap(linear=linear, offset=-linear @ g.mean)


def apply_affine(transform: AffineMap, g: Gaussian) -> Gaussian:
    """
    Image de g par x -> A x + b : N(A mean + b, A cov A^T).

    Raises:
        DimensionMismatchError: Si les dimensions diffèrent
    """
    if transform.dim != g.dim or transform.linear.shape != (g.dim, g.dim):
        raise DimensionMismatchError(
            f"Application de dimension {transform.dim} appliquée à une gaussienne de dimension {g.dim}"
        )
    linear = transform.linear
    cov = linear @ g.cov @ linear.T
    return make_gaussian(linear @ g.mean + transform.offset, 0.5 * (cov + cov.T))


def kl(g1: Gaussian, g2: Gaussian) -> float:
    """
    KL(g1 || g2) en forme close, via le facteur de Cholesky L2 de cov2 :
    log-déterminants par les diagonales, trace par ||L2^-1 L1||_F^2,
    terme de Mahalanobis par ||L2^-1 (mean2 - mean1)||^2.

    Raises:
        DimensionMismatchError: Si les dimensions diffèrent
        NumericalError: Si le résultat est négatif au-delà de l'arrondi
    """
    if g1.dim != g2.dim:
        raise DimensionMismatchError(
            f"KL entre gaussiennes de dimensions {g1.dim} et {g2.dim}"
        )
    n = g1.dim
    logdet1 = 2.0 * np.log(np.diag(g1.chol)).sum()
    logdet2 = 2.0 * np.log(np.diag(g2.chol)).sum()

    try:
        ratio = la.solve_triangular(g2.chol, g1.chol, lower=True)
        delta = la.solve_triangular(g2.chol, g2.mean - g1.mean, lower=True)
    except la.LinAlgError as e:
        raise NumericalError(f"Résolution triangulaire impossible : {e}")

    trace = float(np.sum(ratio * ratio))
    mahalanobis = float(delta @ delta)
    value = 0.5 * (logdet2 - logdet1 + trace + mahalanobis - n)

    if value < 0:
        if value < -KL_CLAMP:
            raise NumericalError(f"Divergence KL négative : {value:.17g}")
        return 0.0
    if not math.isfinite(value):
        raise NumericalError("Divergence KL non finie")
    return value


def kl_to_standard(g: Gaussian) -> float:
    """KL(g || N(0, I)) = 1/2 (-log det cov + Tr cov + mean^T mean - n)"""
    logdet = 2.0 * np.log(np.diag(g.chol)).sum()
    value = 0.5 * (-logdet + np.trace(g.cov) + g.mean @ g.mean - g.dim)
    return max(0.0, float(value))

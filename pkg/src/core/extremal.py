# ============================================================================
# Paires extrémales
# ============================================================================
"""
Construction des paires de gaussiennes qui atteignent le supremum et
l'infimum de la KL inverse, sous forme canonique (g2 = N(0, I), valeur propre
spéciale en première coordonnée) ou plongées dans un repère affine.
"""
import logging
import math

import numpy as np

from .gaussian import apply_affine, make_gaussian, standard_gaussian
from .models import AffineMap, DomainError, ExtremalPair, PairKind, ValidationError
from .scalar_core import f, w1, w2
from .validators import AffineMapValidator, BudgetValidator, DimensionValidator

logger = logging.getLogger(__name__)

FRAME_MAX_CONDITION = 1e8


def _check(budget: float, n: int, name: str) -> float:
    try:
        BudgetValidator.validate_or_raise(budget, name, strict=True)
        DimensionValidator.validate_or_raise(n, "n")
    except ValidationError as e:
        raise DomainError(str(e))
    return float(budget)


def _canonical(kind: PairKind, budget: float, eigenvalue: float, n: int,
               second: float = 1.0, mean_offset: float = 0.0) -> ExtremalPair:
    diagonal = np.ones(n)
    diagonal[0] = eigenvalue
    if n > 1:
        diagonal[1] = second
    mean = np.zeros(n)
    mean[0] = mean_offset
    return ExtremalPair(
        forward_constraint=budget,
        g1=make_gaussian(mean, np.diag(diagonal)),
        g2=standard_gaussian(n),
        kind=kind
    )


def extremal_sup_pair(eps: float, n: int) -> ExtremalPair:
    """
    g2 = N(0, I_n), g1 = N(0, diag(w1(2 eps), 1, ..., 1)) :
    KL(g1||g2) = eps et KL(g2||g1) = sup_reverse_kl(eps).
    """
    eps = _check(eps, n, "eps")
    return _canonical(PairKind.SUP_ATTAINER, eps, w1(2.0 * eps), n)


def extremal_inf_pair(m: float, n: int) -> ExtremalPair:
    """
    g2 = N(0, I_n), g1 = N(0, diag(w2(2M), 1, ..., 1)) :
    KL(g1||g2) = M et KL(g2||g1) = inf_reverse_kl(M).
    """
    m = _check(m, n, "M")
    return _canonical(PairKind.INF_ATTAINER, m, w2(2.0 * m), n)


def embed_in_frame(pair: ExtremalPair, transform: AffineMap) -> ExtremalPair:
    """
    Applique la même application affine aux deux gaussiennes ; les deux
    divergences sont conservées.

    Raises:
        DimensionMismatchError: Si les dimensions diffèrent
        IllConditionedError: Si le conditionnement dépasse 1e8
    """
    AffineMapValidator.validate_or_raise(transform, pair.g1.dim, FRAME_MAX_CONDITION)
    return ExtremalPair(
        forward_constraint=pair.forward_constraint,
        g1=apply_affine(transform, pair.g1),
        g2=apply_affine(transform, pair.g2),
        kind=pair.kind
    )


def perturbed_pair(kind: PairKind, budget: float, n: int, delta: float) -> ExtremalPair:
    """
    Paire voisine de la paire extrémale, de même KL directe.

    Une fraction |delta| du budget 2*budget est déplacée vers la deuxième
    valeur propre (au-dessus de 1 si delta > 0, en dessous sinon), ou vers la
    moyenne quand n = 1 ; la valeur propre extrémale est recalculée sur le
    budget restant. La KL inverse baisse strictement (cas sup) ou monte
    strictement (cas inf).
    """
    budget = _check(budget, n, "budget")
    if not (math.isfinite(delta) and 0 < abs(delta) < 1):
        raise DomainError(f"delta = {delta!r} doit vérifier 0 < |delta| < 1")

    total = 2.0 * budget
    moved = abs(delta) * total
    root = w1 if kind == PairKind.SUP_ATTAINER else w2

    if n == 1:
        offset = math.sqrt(moved)
        remaining = total - offset * offset
        return _canonical(kind, budget, root(max(0.0, remaining)), 1, mean_offset=offset)

    second = w2(moved) if delta > 0 else w1(moved)
    remaining = total - (f(second) - 1.0)
    logger.debug("Perturbation %s : lambda_2 = %r, budget restant %r", kind.value, second, remaining)
    return _canonical(kind, budget, root(max(0.0, remaining)), n, second=second)

# ============================================================================
# Bornes en forme close
# ============================================================================
"""
Bornes sur la divergence KL entre gaussiennes, indépendantes de la dimension :

- supremum de KL(g2||g1) sachant KL(g1||g2) <= eps,
- infimum de KL(g2||g1) sachant KL(g1||g2) >= M,
- inégalité triangulaire relâchée KL(g1||g3) < B(eps1, eps2),
- bornes n-aires sur les sommes de f(1/x_i),

ainsi que leurs développements pour les petits budgets.

Toutes les bornes passent par w1/w2 de scalar_core ; les formules écrites
directement avec W ne servent qu'aux contrôles croisés.
"""
import logging
import math
import numbers
from typing import Tuple

from .lambert_w import lambert_w
from .models import BoundKind, BoundResult, Branch, DomainError
from .scalar_core import (
    LOG_SPACE_THRESHOLD, f, g_r, scalar_inf_excess, scalar_sup_excess, w1, w2
)

logger = logging.getLogger(__name__)

CROSS_CHECK_TOLERANCE = 1e-10


def _budget(value: float, name: str, strict: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise DomainError(f"{name} doit être un réel (reçu {value!r})")
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} doit être fini (reçu {value!r})")
    if strict and value <= 0:
        raise DomainError(f"{name} doit être strictement positif (reçu {value!r})")
    if value < 0:
        raise DomainError(f"{name} doit être positif ou nul (reçu {value!r})")
    return value


def _order(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 1:
        raise DomainError(f"n doit être un entier >= 1 (reçu {n!r})")
    return int(n)


# ========== SUPREMUM ET INFIMUM DE LA KL INVERSE ==========

def sup_reverse_kl(eps: float) -> BoundResult:
    """
    Supremum de KL(g2||g1) quand KL(g1||g2) <= eps :
    1/2 (1/w - log(1/w) - 1) avec w = w1(2 eps).

    Atteint quand g1 et g2 ont même moyenne et qu'une seule valeur propre de
    cov1 relativement à cov2 vaut w1(2 eps), les autres valant 1.

    Raises:
        NumericalError: Au-delà d'environ eps = 354, où la borne dépasse la
            double précision
    """
    eps = _budget(eps, "eps")
    value = 0.5 * scalar_sup_excess(2.0 * eps)
    root = w1(2.0 * eps)
    return BoundResult(
        value=max(0.0, value),
        kind=BoundKind.SUP_REVERSE,
        extremal_eigenvalue=root
    )


def sup_reverse_kl_lambert(eps: float) -> float:
    """Même supremum écrit directement avec W0 (contrôle croisé)"""
    eps = _budget(eps, "eps")
    root = -lambert_w(Branch.PRINCIPAL, -math.exp(-(1.0 + 2.0 * eps)))
    return 0.5 * (1.0 / root - math.log(1.0 / root) - 1.0)


def sup_reverse_kl_series(eps: float) -> float:
    """Approximation petits budgets eps + 2 eps^1.5"""
    eps = _budget(eps, "eps")
    return eps + 2.0 * eps ** 1.5


def sup_reverse_kl_expansion(eps: float) -> float:
    """
    Développement exact à l'ordre eps^1.5 : eps + (4/3) eps^1.5.

    Le terme d'ordre 1.5 de sup_reverse_kl_series est surestimé ; l'écart
    entre les deux est (2/3) eps^1.5.
    """
    eps = _budget(eps, "eps")
    return eps + 4.0 * eps ** 1.5 / 3.0


def inf_reverse_kl(m: float) -> BoundResult:
    """
    Infimum de KL(g2||g1) quand KL(g1||g2) >= M > 0 :
    1/2 (1/w - log(1/w) - 1) avec w = w2(2M).
    """
    m = _budget(m, "M", strict=True)
    value = 0.5 * scalar_inf_excess(2.0 * m)
    root = w2(2.0 * m)
    return BoundResult(
        value=max(0.0, value),
        kind=BoundKind.INF_REVERSE,
        extremal_eigenvalue=root
    )


def dual_roundtrip(m: float) -> float:
    """sup_reverse_kl(inf_reverse_kl(M)) ; vaut M par dualité des deux bornes"""
    return sup_reverse_kl(inf_reverse_kl(m).value).value


# ========== BORNES N-AIRES ==========

def nary_sup_bound(eps: float, n: int) -> float:
    """
    Supremum de sum f(1/x_i) sous sum f(x_i) <= n + eps :
    f(1/w1(eps)) + n - 1.
    """
    eps = _budget(eps, "eps")
    n = _order(n)
    return f(1.0 / w1(eps)) + (n - 1)


def nary_inf_bound(m: float, n: int) -> float:
    """
    Infimum de sum f(1/x_i) sous sum f(x_i) >= n + M :
    f(1/w2(M)) + n - 1.
    """
    m = _budget(m, "M")
    n = _order(n)
    return f(1.0 / w2(m)) + (n - 1)


# ========== INÉGALITÉ TRIANGULAIRE RELÂCHÉE ==========

def _triangle_terms(eps1: float, eps2: float) -> Tuple[float, float]:
    """(partie covariance, partie moyenne) de la borne triangulaire"""
    upper2 = w2(2.0 * eps2)
    lower2 = w1(2.0 * eps2)
    covariance_part = eps1 + eps2 + 0.5 * g_r(2.0 * eps1) * g_r(2.0 * eps2)
    mean_shift = math.sqrt(2.0 * eps1) + math.sqrt(2.0 * eps2 / lower2)
    return covariance_part, 0.5 * upper2 * mean_shift * mean_shift


def triangle_bound_lambert(eps1: float, eps2: float) -> float:
    """Borne triangulaire écrite avec W0 et W-1 (contrôle croisé)"""
    eps1 = _budget(eps1, "eps1")
    eps2 = _budget(eps2, "eps2")
    a = lambert_w(Branch.MINUS_ONE, -math.exp(-(1.0 + 2.0 * eps1))) if eps1 > 0 else -1.0
    b = lambert_w(Branch.MINUS_ONE, -math.exp(-(1.0 + 2.0 * eps2))) if eps2 > 0 else -1.0
    b0 = lambert_w(Branch.PRINCIPAL, -math.exp(-(1.0 + 2.0 * eps2))) if eps2 > 0 else -1.0
    shift = math.sqrt(2.0 * eps1) + math.sqrt(2.0 * eps2 / (-b0))
    return eps1 + eps2 + 0.5 * (a * b + a + b + 1.0 - b * shift * shift)


def triangle_bound(eps1: float, eps2: float) -> BoundResult:
    """
    Borne stricte sur KL(g1||g3) quand KL(g1||g2) <= eps1 et KL(g2||g3) <= eps2 :
    eps1 + eps2 + 1/2 ((w2(2eps1) - 1)(w2(2eps2) - 1)
                       + w2(2eps2)(sqrt(2eps1) + sqrt(2eps2 / w1(2eps2)))^2).
    """
    eps1 = _budget(eps1, "eps1")
    eps2 = _budget(eps2, "eps2")
    covariance_part, mean_part = _triangle_terms(eps1, eps2)
    value = covariance_part + mean_part

    if 1.0 + 2.0 * max(eps1, eps2) <= LOG_SPACE_THRESHOLD:
        reference = triangle_bound_lambert(eps1, eps2)
        if abs(reference - value) > CROSS_CHECK_TOLERANCE * max(1.0, abs(value)):
            logger.warning(
                "Borne triangulaire (%r, %r) : écart %.3e avec la formule en W",
                eps1, eps2, abs(reference - value)
            )
    return BoundResult(value=value, kind=BoundKind.TRIANGLE, strict=True)


def triangle_bound_standard(eps1: float, eps2: float, n: int) -> float:
    """
    Borne triangulaire quand la gaussienne intermédiaire est N(0, I_n),
    évaluée avant simplification de la dimension :
    1/2 (f(w2(2eps1) w2(2eps2)) + n - 1 - n + w2(2eps2) (...)^2).
    """
    eps1 = _budget(eps1, "eps1")
    eps2 = _budget(eps2, "eps2")
    n = _order(n)
    upper1 = w2(2.0 * eps1)
    upper2 = w2(2.0 * eps2)
    shift = math.sqrt(2.0 * eps1) + math.sqrt(2.0 * eps2 / w1(2.0 * eps2))
    trace_part = f(upper1 * upper2) + (n - 1)
    return 0.5 * (trace_part - n + upper2 * shift * shift)


def triangle_bound_series(eps1: float, eps2: float) -> float:
    """Approximation petits budgets 3 eps1 + 3 eps2 + 2 sqrt(eps1 eps2)"""
    eps1 = _budget(eps1, "eps1")
    eps2 = _budget(eps2, "eps2")
    return 3.0 * eps1 + 3.0 * eps2 + 2.0 * math.sqrt(eps1 * eps2)

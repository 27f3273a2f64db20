# ============================================================================
# Calcul scalaire autour de f(x) = x - log x
# ============================================================================
"""
Fonctions scalaires sur lesquelles reposent toutes les bornes :
f et ses dérivées, racines w1/w2 de f(x) = 1 + t, fonctions auxiliaires
f_l, f_r, g_l, g_r, fonctions Delta et applications S(t) = f(1/w1(t)),
I(t) = f(1/w2(t)).

Les racines sont amorcées par la fonction W de Lambert puis affinées par Newton
sur les formes logarithmiques e^s - 1 - s = t (w1 = e^s) et u - log(1 + u) = t
(w2 = 1 + u), qui gardent toute leur précision quand t -> 0. root_oracle
fournit une résolution indépendante par dichotomie pour la vérification croisée.
"""
import logging
import math
from typing import Tuple, Union

import numpy as np
from scipy.optimize import bisect

from .lambert_w import lambert_w
from .models import Branch, DomainError, EpsilonBudget, NumericalError, RootSide

logger = logging.getLogger(__name__)

Budget = Union[float, EpsilonBudget]

# Au-delà, e^{-(1+t)} entre dans les sous-normaux
LOG_SPACE_THRESHOLD = 700.0

_BISECT_RTOL = 4.0 * np.finfo(float).eps
_BISECT_XTOL = 1e-300
_BISECT_MAXITER = 4000

# Séries de e^y - 1 - y et u - log(1 + u) sous ce seuil
_SERIES_CUTOFF = 0.1
_SERIES_TERMS = 20

# Amorce des racines par série en sqrt(2t) sous ce budget
_SMALL_BUDGET = 1e-3
_NEWTON_STEPS = 8
_NEWTON_TOLERANCE = 1e-16


def _budget(t: Budget, name: str = "t") -> float:
    """Normalise un budget (float ou EpsilonBudget) et refuse t < 0, NaN, inf"""
    if isinstance(t, EpsilonBudget):
        return float(t.t)
    try:
        return EpsilonBudget(float(t)).t
    except (TypeError, ValueError) as e:
        raise DomainError(f"{name} : {e}")


def _positive(t: Budget, name: str) -> float:
    value = _budget(t, name)
    if value == 0:
        raise DomainError(f"{name}(0) : dérivée singulière en t = 0 (w1 = w2 = 1)")
    return value


# ========== f ET DÉRIVÉE ==========

def f(x: float) -> float:
    """f(x) = x - log x, minimum 1 en x = 1"""
    if not x > 0:
        raise DomainError(f"f({x!r}) : x doit être strictement positif")
    return x - math.log(x)


def f_prime(x: float) -> float:
    """f'(x) = 1 - 1/x"""
    if not x > 0:
        raise DomainError(f"f'({x!r}) : x doit être strictement positif")
    return 1.0 - 1.0 / x


def f_l(x: float) -> float:
    """f_l(x) = f(1 - x) - 1 sur [0, 1)"""
    if not 0 <= x < 1:
        raise DomainError(f"f_l({x!r}) : x doit être dans [0, 1)")
    return _log1p_deficit(-x)


def f_r(x: float) -> float:
    """f_r(x) = f(x + 1) - 1 sur [0, +inf)"""
    if not 0 <= x < math.inf:
        raise DomainError(f"f_r({x!r}) : x doit être >= 0")
    return _log1p_deficit(x)


def f_l_prime(x: float) -> float:
    if not 0 <= x < 1:
        raise DomainError(f"f_l'({x!r}) : x doit être dans [0, 1)")
    return 1.0 / (1.0 - x) - 1.0


def f_r_prime(x: float) -> float:
    if not 0 <= x < math.inf:
        raise DomainError(f"f_r'({x!r}) : x doit être >= 0")
    return 1.0 - 1.0 / (x + 1.0)


# ========== RACINES DE f(x) = 1 + t ==========

def _expm1_excess(y: float) -> float:
    """e^y - 1 - y, par série quand |y| est petit"""
    if abs(y) >= _SERIES_CUTOFF:
        return math.expm1(y) - y
    term = 0.5 * y * y
    total = term
    for k in range(3, _SERIES_TERMS):
        term *= y / k
        total += term
    return total


def _log1p_deficit(u: float) -> float:
    """u - log(1 + u) pour u > -1, par série quand |u| est petit"""
    if abs(u) >= _SERIES_CUTOFF:
        return u - math.log1p(u)
    total = 0.0
    power = -u
    for k in range(2, _SERIES_TERMS):
        power *= -u
        total += power / k
    return total


def _lower_seed(t: float) -> float:
    if t < _SMALL_BUDGET:
        q = math.sqrt(2.0 * t)
        return -q - q * q / 6.0 - q ** 3 / 36.0
    s = math.log(-lambert_w(Branch.PRINCIPAL, -math.exp(-(1.0 + t))))
    return s if s < 0 else -math.sqrt(2.0 * t)


def _upper_seed(t: float) -> float:
    if t < _SMALL_BUDGET:
        q = math.sqrt(2.0 * t)
        return math.expm1(q - q * q / 6.0 + q ** 3 / 36.0)
    u = -lambert_w(Branch.MINUS_ONE, -math.exp(-(1.0 + t))) - 1.0
    return u if u > 0 else math.sqrt(2.0 * t)


def log_w1(t: Budget) -> float:
    """
    log w1(t) <= 0, solution de e^s - 1 - s = t.

    Amorce en W0 (ou série en sqrt(2t) pour les petits budgets) puis Newton ;
    reste exact là où w1 arrondi vaut 1.
    """
    t = _budget(t)
    if t == 0:
        return 0.0
    if 1.0 + t > LOG_SPACE_THRESHOLD:
        # w = exp(w - 1 - t) avec w négligeable
        s = -(1.0 + t)
        return s + math.exp(s)
    s = _lower_seed(t)
    for _ in range(_NEWTON_STEPS):
        slope = math.expm1(s)
        if slope == 0.0:
            break
        step = (_expm1_excess(s) - t) / slope
        s_next = s - step
        if s_next >= 0.0:
            s_next = 0.5 * s
        if s_next == s or abs(step) <= _NEWTON_TOLERANCE * abs(s_next):
            return s_next
        s = s_next
    return s


def _upper_excess(t: float) -> float:
    """w2(t) - 1, solution u >= 0 de u - log(1 + u) = t"""
    if t == 0:
        return 0.0
    if 1.0 + t > LOG_SPACE_THRESHOLD:
        logger.debug("w2(%r) : repli sur la dichotomie", t)
        return root_oracle(t, RootSide.UPPER) - 1.0
    u = _upper_seed(t)
    for _ in range(_NEWTON_STEPS):
        if u == 0.0:
            break
        step = (_log1p_deficit(u) - t) * (1.0 + u) / u
        u_next = u - step
        if u_next <= 0.0:
            u_next = 0.5 * u
        if u_next == u or abs(step) <= _NEWTON_TOLERANCE * u_next:
            return u_next
        u = u_next
    return u


def w1(t: Budget) -> float:
    """
    Plus petite racine de x - log x = 1 + t : w1(t) = -W0(-e^{-(1+t)}), dans (0, 1].

    Raises:
        DomainError: Si t < 0
        NumericalError: Si la racine sous-dépasse la double précision
    """
    t = _budget(t)
    if t == 0:
        return 1.0
    root = math.exp(log_w1(t))
    if root == 0.0:
        raise NumericalError(f"w1({t!r}) : sous-dépassement, la racine n'est pas représentable")
    if root < np.finfo(float).tiny:
        logger.warning("w1(%r) = %r est sous-normal, précision relative dégradée", t, root)
    return min(1.0, root)


def w2(t: Budget) -> float:
    """
    Plus grande racine de x - log x = 1 + t : w2(t) = -W-1(-e^{-(1+t)}), dans [1, +inf).

    Raises:
        DomainError: Si t < 0
    """
    return max(1.0, 1.0 + _upper_excess(_budget(t)))


def w1_prime(t: Budget) -> float:
    """w1'(t) = -w1 / (1 - w1) < 0, pour t > 0"""
    s = log_w1(_positive(t, "w1'"))
    return math.exp(s) / math.expm1(s)


def w2_prime(t: Budget) -> float:
    """w2'(t) = -w2 / (1 - w2) > 0, pour t > 0"""
    u = _upper_excess(_positive(t, "w2'"))
    return (1.0 + u) / u


def inverse_f(y: float, branch: Branch) -> float:
    """Réciproque de f sur une branche : -W(-e^{-y}) pour y >= 1"""
    if not math.isfinite(y) or y < 1:
        raise DomainError(f"f^-1({y!r}) : y doit être >= 1")
    if branch == Branch.PRINCIPAL:
        return w1(y - 1.0)
    return w2(y - 1.0)


def root_oracle(t: Budget, side: RootSide) -> float:
    """
    Résout f(x) = 1 + t par dichotomie seule, sans fonction W.

    Côté LOWER, on cherche s = log x dans [-(1+t), 0] avec expm1(s) - s = t ;
    côté UPPER, u = x - 1 dans [0, U - 1] avec u - log1p(u) = t et
    U = 2 + 2t + 2 log(2 + 2t) + 10.
    """
    t = _budget(t)
    if t == 0:
        return 1.0
    if side == RootSide.LOWER:
        s = bisect(lambda s: _expm1_excess(s) - t, -(1.0 + t), 0.0,
                   xtol=_BISECT_XTOL, rtol=_BISECT_RTOL, maxiter=_BISECT_MAXITER)
        x = math.exp(s)
        if x == 0.0:
            raise NumericalError(f"root_oracle({t!r}) : la racine inférieure sous-dépasse")
        return min(1.0, x)
    if side == RootSide.UPPER:
        upper = 2.0 + 2.0 * t + 2.0 * math.log(2.0 + 2.0 * t) + 10.0
        u = bisect(lambda u: _log1p_deficit(u) - t, 0.0, upper - 1.0,
                   xtol=_BISECT_XTOL, rtol=_BISECT_RTOL, maxiter=_BISECT_MAXITER)
        return 1.0 + u
    raise DomainError(f"Côté de racine inconnu : {side!r}")


# ========== g_l, g_r ==========

def g_l(e: Budget) -> float:
    """g_l = f_l^-1 = 1 - w1"""
    return -math.expm1(log_w1(_budget(e, "e")))


def g_r(e: Budget) -> float:
    """g_r = f_r^-1 = w2 - 1"""
    return _upper_excess(_budget(e, "e"))


def g_l_prime(e: Budget) -> float:
    """g_l'(e) = 1/(1 - w1(e)) - 1, pour e > 0"""
    s = log_w1(_positive(e, "g_l'"))
    return -math.exp(s) / math.expm1(s)


def g_r_prime(e: Budget) -> float:
    """g_r'(e) = 1 + 1/(w2(e) - 1) ; vaut +inf en e = 0 par convention"""
    e = _budget(e, "e")
    if e == 0:
        return math.inf
    return 1.0 + 1.0 / _upper_excess(e)


# ========== FONCTIONS DELTA ==========

def delta_sup(e: Budget) -> float:
    """Delta(e) = f(1/w1(e)) - f(w1(e)) = 1/w1 - w1 + 2 log w1"""
    s = log_w1(_budget(e, "e"))
    return _expm1_excess(-s) - _expm1_excess(s)


def delta_sup_prime(e: Budget) -> float:
    """Delta'(e) = 1/w1(e) - 1"""
    return math.expm1(-log_w1(_budget(e, "e")))


def delta_sup_second(e: Budget) -> float:
    """Delta''(e) = 1 / (w1 (1 - w1)) > 0, pour e > 0"""
    s = log_w1(_positive(e, "Delta''"))
    return -math.exp(-s) / math.expm1(s)


def delta_inf(m: Budget) -> float:
    """Delta(M) = f(w2(M)) - f(1/w2(M)) = w2 - 1/w2 - 2 log w2"""
    root = w2(_budget(m, "M"))
    return root - 1.0 / root - 2.0 * math.log(root)


# ========== APPLICATIONS S ET I ==========

def scalar_sup_excess(t: Budget) -> float:
    """
    S(t) - 1 = 1/w1 - 1 + log w1, calculé depuis log w1.

    Raises:
        NumericalError: Si 1/w1(t) dépasse la double précision
    """
    s = log_w1(t)
    try:
        return _expm1_excess(-s)
    except OverflowError:
        raise NumericalError(f"S({t!r}) : 1/w1 dépasse la double précision")


def scalar_inf_excess(t: Budget) -> float:
    """I(t) - 1 = log w2 - 1 + 1/w2, calculé depuis w2 - 1"""
    u = _upper_excess(_budget(t))
    v = u / (1.0 + u)
    if v < _SERIES_CUTOFF:
        return _log1p_deficit(-v)
    return math.log1p(u) - v


def scalar_sup_map(t: Budget) -> float:
    """S(t) = f(1/w1(t)), borne supérieure de f(1/x) sous f(x) <= 1 + t"""
    return 1.0 + scalar_sup_excess(t)


def scalar_inf_map(t: Budget) -> float:
    """I(t) = f(1/w2(t)), borne inférieure de f(1/x) sous f(x) >= 1 + t"""
    return 1.0 + scalar_inf_excess(t)


def f_product_identity_check(t1: Budget, t2: Budget,
                             side: RootSide = RootSide.UPPER) -> Tuple[float, float]:
    """
    Les deux membres de f(w(t1) w(t2)) = t1 + t2 + 2 + w(t1) w(t2) - w(t1) - w(t2),
    avec w = w2 (UPPER) ou w = w1 (LOWER).

    Returns:
        (membre de gauche, membre de droite)
    """
    t1 = _budget(t1, "t1")
    t2 = _budget(t2, "t2")
    root = w2 if side == RootSide.UPPER else w1
    a, b = root(t1), root(t2)
    left = f(a * b)
    right = t1 + t2 + 2.0 + a * b - a - b
    return left, right

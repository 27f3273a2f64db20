# ============================================================================
# Fonction W de Lambert (branches réelles W0 et W-1)
# ============================================================================
"""
Évaluation en double précision des branches réelles de la fonction W de Lambert,
réciproque de y = w e^w, et de leurs dérivées.

Schéma : initialisation par région (série en racine carrée près du point de
branchement, développement asymptotique logarithmique ailleurs) puis itération
de Halley sur w e^w - x.
"""
import logging
import math

from .models import Branch, DomainError

logger = logging.getLogger(__name__)

INV_E = math.exp(-1.0)
BRANCH_SLOP = 1e-15
MAX_ITERATIONS = 50
STEP_TOLERANCE = 1e-15
RESIDUAL_TOLERANCE = 1e-13

# En dessous de ce seuil (relatif à -1/e) la série de branchement sert d'amorce
_SERIES_REGION = -0.25

_ABOVE_MINUS_ONE = math.nextafter(-1.0, 0.0)
_BELOW_MINUS_ONE = math.nextafter(-1.0, -math.inf)


def _check_domain(branch: Branch, x: float) -> float:
    """Valide x pour la branche et rabat sur -1/e les arguments à BRANCH_SLOP près"""
    if not isinstance(branch, Branch):
        raise DomainError(f"Branche inconnue : {branch!r}")
    if not math.isfinite(x):
        raise DomainError(f"W({x!r}) : argument non fini")
    if x < -INV_E:
        if x < -INV_E - BRANCH_SLOP:
            raise DomainError(f"W({x!r}) : argument inférieur à -1/e")
        return -INV_E
    if branch == Branch.MINUS_ONE and x >= 0:
        raise DomainError(f"W-1({x!r}) : la branche -1 exige -1/e <= x < 0")
    return x


def _branch_point_seed(branch: Branch, x: float) -> float:
    """Série en p = sqrt(2(1 + e x)) autour de x = -1/e"""
    p = math.sqrt(max(0.0, 2.0 * (1.0 + math.e * x)))
    sign = 1.0 if branch == Branch.PRINCIPAL else -1.0
    return -1.0 + sign * p - p * p / 3.0 + sign * 11.0 * p ** 3 / 72.0


def _initial_guess(branch: Branch, x: float) -> float:
    if x < _SERIES_REGION:
        return _branch_point_seed(branch, x)
    if branch == Branch.PRINCIPAL:
        if x <= 3.0:
            return math.log1p(x)
        l1 = math.log(x)
        l2 = math.log(l1)
        return l1 - l2 + l2 / l1
    l1 = math.log(-x)
    l2 = math.log(-l1)
    return l1 - l2 + l2 / l1


def _halley(branch: Branch, x: float, w: float) -> float:
    """
    Itération de Halley maintenue du bon côté de -1.

    Près de -1/e le résidu w e^w - x n'est connu qu'au bruit d'arrondi près :
    on s'arrête dès que le pas cesse de décroître alors que le résidu est
    déjà sous RESIDUAL_TOLERANCE.
    """
    previous_step = math.inf
    for iteration in range(MAX_ITERATIONS):
        ew = math.exp(w)
        residual = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0 or residual == 0.0:
            return w
        step = residual / (ew * wp1 - (w + 2.0) * residual / (2.0 * wp1))
        if abs(step) >= previous_step and abs(residual) <= RESIDUAL_TOLERANCE * abs(x):
            logger.debug("%s(%r) : stagnation au bruit d'arrondi après %d itération(s)",
                         branch.value, x, iteration)
            return w
        previous_step = abs(step)
        w_next = w - step

        if branch == Branch.PRINCIPAL and w_next <= -1.0:
            w_next = max(0.5 * (w - 1.0), _ABOVE_MINUS_ONE)
        elif branch == Branch.MINUS_ONE and w_next >= -1.0:
            w_next = min(0.5 * (w - 1.0), _BELOW_MINUS_ONE)

        if abs(w_next - w) <= STEP_TOLERANCE * (1.0 + abs(w_next)):
            logger.debug("%s(%r) : convergence en %d itération(s)", branch.value, x, iteration + 1)
            return w_next
        w = w_next

    logger.warning("%s(%r) : Halley non convergé après %d itérations", branch.value, x, MAX_ITERATIONS)
    return w


def lambert_w(branch: Branch, x: float) -> float:
    """
    Valeur réelle de W sur la branche demandée.

    Args:
        branch: Branch.PRINCIPAL (x >= -1/e) ou Branch.MINUS_ONE (-1/e <= x < 0)
        x: Argument

    Returns:
        w tel que w e^w = x, dans l'image de la branche

    Raises:
        DomainError: Si x est hors du domaine de la branche
    """
    x = _check_domain(branch, float(x))
    if x == -INV_E:
        return -1.0
    if x == 0.0:
        return 0.0
    return _halley(branch, x, _initial_guess(branch, x))


def lambert_w_derivative(branch: Branch, x: float) -> float:
    """
    Dérivée W'(x) = W / (x (1 + W)).

    Raises:
        DomainError: En x = 0 et au point de branchement x = -1/e
    """
    x = float(x)
    if x == 0.0:
        raise DomainError("W'(0) : point exclu de la formule de la dérivée")
    x = _check_domain(branch, x)
    if x == -INV_E:
        raise DomainError("W'(-1/e) : dérivée singulière au point de branchement")
    w = lambert_w(branch, x)
    # W / x = e^{-W}
    return math.exp(-w) / (1.0 + w)


def lambert_w_branch_series(branch: Branch, eps: float) -> float:
    """
    Développement de W(-e^{-(1+2 eps)}) en puissances de sqrt(eps) :
    -1 +/- 2 sqrt(eps) - (4/3) eps +/- (2/9) eps^1.5, signe + pour W0.
    """
    if not isinstance(branch, Branch):
        raise DomainError(f"Branche inconnue : {branch!r}")
    if not math.isfinite(eps) or eps < 0:
        raise DomainError(f"Développement de W : eps = {eps!r} doit être >= 0")
    sign = 1.0 if branch == Branch.PRINCIPAL else -1.0
    root = math.sqrt(eps)
    return -1.0 + sign * 2.0 * root - 4.0 * eps / 3.0 + sign * 2.0 * eps * root / 9.0

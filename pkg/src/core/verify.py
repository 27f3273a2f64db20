# ============================================================================
# Banc de vérification par falsification
# ============================================================================
"""
Campagnes aléatoires et balayages de grilles confrontant chaque borne et
chaque lemme à des oracles indépendants.

Chaque essai reçoit une graine dérivée de (graine maîtresse, cellule, essai) :
le rapport ne dépend pas du nombre de threads. Les essais dont la calibration
échoue sont annotés dans le rapport, jamais ignorés en silence.
"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache, partial
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as la
from scipy.optimize import brentq

from . import bounds
from .extremal import extremal_inf_pair, extremal_sup_pair
from .gaussian import apply_affine, kl, make_gaussian
from .generators import DEFAULT_LOG_EIG_RANGE, FrameGenerator, GaussianGenerator, SeedSplitter
from .lambert_w import lambert_w, lambert_w_branch_series
from .models import (
    AllocationObjective, BoundSense, Branch, DimensionMismatchError, DomainError,
    Gaussian, GridSpec, HarnessSettings, NumericalError, RootSide, TrialRecord,
    VerificationReport
)
from .scalar_core import (
    delta_inf, delta_sup, delta_sup_prime, delta_sup_second, f, f_prime,
    f_product_identity_check, g_l, g_l_prime, g_r, g_r_prime, root_oracle,
    scalar_inf_map, scalar_sup_map, w1, w1_prime, w2, w2_prime
)
from .validators import AllocationValidator, BudgetValidator, DimensionValidator, GridValidator

logger = logging.getLogger(__name__)

CALIBRATION_TOLERANCE = 1e-9
FD_ALLOWANCE = 1e-5
_SCAN_POINTS = 17

Outcome = Union[TrialRecord, str]


def random_spd(dim: int, seed: int,
               log_eig_range: Tuple[float, float] = DEFAULT_LOG_EIG_RANGE) -> np.ndarray:
    """Matrice SPD aléatoire déterministe (voir GaussianGenerator.random_spd)"""
    return GaussianGenerator.random_spd(dim, seed, log_eig_range)


# ============================================================================
# CALIBRATION - atteindre exactement une valeur de KL
# ============================================================================

def _interpolate(start: Gaussian, end: Gaussian, s: float) -> Gaussian:
    """N(mean_s + s (mean_e - mean_s), (1 - s) cov_s + s cov_e)"""
    mean = start.mean + s * (end.mean - start.mean)
    cov = (1.0 - s) * start.cov + s * end.cov
    return make_gaussian(mean, cov)


def _solve_on_path(divergence: Callable[[float], float], target: float,
                   scan: Sequence[float]) -> Optional[float]:
    """
    Premier sous-intervalle de scan où divergence - target change de signe,
    puis Brent ; None si la cible n'est jamais atteinte.
    """
    previous = scan[0]
    for s in scan[1:]:
        value = divergence(s) - target
        if value == 0:
            return s
        if value > 0:
            logger.debug("Calibration : crochet [%r, %r]", previous, s)
            return brentq(lambda u: divergence(u) - target, previous, s,
                          xtol=1e-300, rtol=1e-15, maxiter=200)
        previous = s
    return None


def _mean_scaling(divergence: Callable[[float], float], base: float, curvature: float,
                  target: float) -> float:
    """Facteur c tel que base + c^2 curvature / 2 = target, affiné par Brent"""
    if curvature <= 0:
        raise NumericalError("Cible inatteignable : moyennes confondues et covariance épuisée")
    c = math.sqrt(2.0 * (target - base) / curvature)
    if abs(divergence(c) - target) <= CALIBRATION_TOLERANCE * target:
        return c
    return brentq(lambda u: divergence(u) - target, 0.0, 2.0 * c,
                  xtol=1e-300, rtol=1e-15, maxiter=200)


def _check_calibration(achieved: float, target: float) -> None:
    if abs(achieved - target) > CALIBRATION_TOLERANCE * target:
        raise NumericalError(
            f"Calibration imprécise : KL = {achieved:.17g} pour une cible {target:.17g}"
        )


def _check_target(g1: Gaussian, g2: Gaussian, target: float) -> None:
    if g1.dim != g2.dim:
        raise DimensionMismatchError(f"Calibration entre dimensions {g1.dim} et {g2.dim}")
    if not (math.isfinite(target) and target > 0):
        raise DomainError(f"Cible de calibration invalide : {target!r}")


def calibrate_pair_to_kl(g1: Gaussian, g2: Gaussian, target: float) -> Gaussian:
    """
    Déplace g1 vers g2 sur N(mean2 + s (mean1 - mean2), (1 - s) cov2 + s cov1)
    pour obtenir KL(g1'||g2) = target à 1e-9 près en relatif.

    KL(g(s)||g2) est convexe en s et nulle en 0, donc croissante sur [0, 1].
    Si la cible dépasse KL(g1||g2), on garde cov1 et on allonge l'écart des
    moyennes.

    Raises:
        NumericalError: Si la cible reste inatteignable
    """
    _check_target(g1, g2, target)
    full = kl(g1, g2)
    if full == 0:
        raise NumericalError("KL(g1||g2) nulle : aucune direction de calibration")

    if target <= full:
        s = _solve_on_path(lambda u: kl(_interpolate(g2, g1, u), g2), target, [0.0, 1.0])
        candidate = g1 if s is None or s == 1.0 else _interpolate(g2, g1, s)
    else:
        direction = g1.mean - g2.mean
        base_gaussian = make_gaussian(g2.mean, g1.cov)
        whitened = la.solve_triangular(g2.chol, direction, lower=True)

        def shifted(c: float) -> float:
            return kl(make_gaussian(g2.mean + c * direction, g1.cov), g2)

        c = _mean_scaling(shifted, kl(base_gaussian, g2), float(whitened @ whitened), target)
        candidate = make_gaussian(g2.mean + c * direction, g1.cov)

    _check_calibration(kl(candidate, g2), target)
    return candidate


def calibrate_reference_to_kl(g2: Gaussian, g3: Gaussian, target: float) -> Gaussian:
    """
    Variante sur le second argument : renvoie g3' avec KL(g2||g3') = target,
    g3' pris sur le segment de g2 vers g3 (balayage puis Brent, la divergence
    n'étant pas monotone en général), sinon par allongement des moyennes.
    """
    _check_target(g2, g3, target)

    def along(u: float) -> float:
        return kl(g2, _interpolate(g2, g3, u))

    scan = list(np.linspace(0.0, 1.0, _SCAN_POINTS))
    s = _solve_on_path(along, target, scan)
    if s is not None:
        candidate = _interpolate(g2, g3, s)
    else:
        direction = g3.mean - g2.mean
        base_gaussian = make_gaussian(g2.mean, g3.cov)
        chol = base_gaussian.chol
        whitened = la.solve_triangular(chol, direction, lower=True)

        def shifted(c: float) -> float:
            return kl(g2, make_gaussian(g2.mean + c * direction, g3.cov))

        c = _mean_scaling(shifted, kl(g2, base_gaussian), float(whitened @ whitened), target)
        candidate = make_gaussian(g2.mean + c * direction, g3.cov)

    _check_calibration(kl(g2, candidate), target)
    return candidate


# ============================================================================
# EXÉCUTION - parallélisme déterministe
# ============================================================================

def _settings(settings: Optional[HarnessSettings]) -> HarnessSettings:
    return settings if settings is not None else HarnessSettings.from_env()


def _execute(tasks: List[Callable[[], Outcome]], threads: int) -> List[Outcome]:
    """Exécute les essais ; les résultats restent dans l'ordre des tâches"""
    if threads <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda task: task(), tasks))


def _collect(report: VerificationReport, outcomes: Iterable[Outcome]) -> VerificationReport:
    for outcome in outcomes:
        if isinstance(outcome, str):
            logger.warning("Essai ignoré : %s", outcome)
            report.skipped.append(outcome)
        else:
            report.trials.append(outcome)
    logger.info(report.summary())
    return report


def _guarded(trial: Callable[[], TrialRecord], where: str) -> Outcome:
    try:
        return trial()
    except NumericalError as e:
        return f"{where} : {e}"


def _check_sweep(values: Sequence[float], dims: Sequence[int], trials: int,
                 name: str, strict: bool = True) -> None:
    for value in values:
        BudgetValidator.validate_or_raise(value, name, strict=strict)
    if not dims:
        raise DomainError("Aucune dimension demandée")
    for dim in dims:
        DimensionValidator.validate_or_raise(dim, "dim")
    DimensionValidator.validate_or_raise(trials, "trials", minimum=0)


# ============================================================================
# CAMPAGNES SUR LA KL INVERSE
# ============================================================================

def _reverse_witness(kind: str, budget: float, dim: int, cell: int, master_seed: int,
                     bound: float) -> TrialRecord:
    pair = extremal_sup_pair(budget, dim) if kind == "sup" else extremal_inf_pair(budget, dim)
    return TrialRecord(
        seed=SeedSplitter.trial_seed(master_seed, cell, 0), dim=dim, cell=(budget,),
        trial_index=0, constraint_value=(kl(pair.g1, pair.g2),),
        observed=kl(pair.g2, pair.g1), bound=bound, is_witness=True
    )


def _reverse_trial(budget: float, dim: int, cell: int, index: int, master_seed: int,
                   bound: float, log_eig_range: Tuple[float, float]) -> TrialRecord:
    seed = SeedSplitter.trial_seed(master_seed, cell, index)
    rng = SeedSplitter.rng(seed)
    reference = GaussianGenerator.random_gaussian(dim, rng, log_eig_range)
    moving = GaussianGenerator.random_gaussian(dim, rng, log_eig_range)
    calibrated = calibrate_pair_to_kl(moving, reference, budget)
    return TrialRecord(
        seed=seed, dim=dim, cell=(budget,), trial_index=index,
        constraint_value=(kl(calibrated, reference),),
        observed=kl(reference, calibrated), bound=bound
    )


def _reverse_sweep(kind: str, budgets: Sequence[float], dims: Sequence[int],
                   trials_per_cell: int, master_seed: int,
                   settings: Optional[HarnessSettings], bound_scale: float,
                   log_eig_range: Tuple[float, float]) -> VerificationReport:
    settings = _settings(settings)
    name = "eps" if kind == "sup" else "M"
    _check_sweep(budgets, dims, trials_per_cell, name)
    report = VerificationReport(
        suite="symmetry" if kind == "sup" else "infimum",
        master_seed=master_seed,
        tolerance=settings.matrix_tolerance,
        sense=BoundSense.UPPER if kind == "sup" else BoundSense.LOWER
    )
    logger.info("Campagne %s : %d cellule(s), %d essai(s) par cellule",
                report.suite, len(budgets) * len(dims), trials_per_cell)

    tasks: List[Callable[[], Outcome]] = []
    for cell, (budget, dim) in enumerate(itertools.product(budgets, dims)):
        result = bounds.sup_reverse_kl(budget) if kind == "sup" else bounds.inf_reverse_kl(budget)
        bound = bound_scale * result.value
        tasks.append(partial(_reverse_witness, kind, budget, dim, cell, master_seed, bound))
        for index in range(1, trials_per_cell + 1):
            trial = partial(_reverse_trial, budget, dim, cell, index, master_seed, bound, log_eig_range)
            tasks.append(partial(_guarded, trial, f"cellule {cell} ({name}={budget!r}, dim={dim}) essai {index}"))

    return _collect(report, _execute(tasks, settings.threads))


def sweep_symmetry(eps_list: Sequence[float], dims: Sequence[int], trials_per_cell: int,
                   master_seed: int, settings: Optional[HarnessSettings] = None,
                   bound_scale: float = 1.0,
                   log_eig_range: Tuple[float, float] = DEFAULT_LOG_EIG_RANGE) -> VerificationReport:
    """
    Pour chaque cellule (eps, dim) : paires aléatoires calibrées à KL(g1||g2) = eps,
    KL(g2||g1) comparée au supremum ; la paire extrémale sert de témoin d'atteinte
    (essai d'indice 0).
    """
    return _reverse_sweep("sup", eps_list, dims, trials_per_cell, master_seed,
                          settings, bound_scale, log_eig_range)


def sweep_infimum(m_list: Sequence[float], dims: Sequence[int], trials_per_cell: int,
                  master_seed: int, settings: Optional[HarnessSettings] = None,
                  bound_scale: float = 1.0,
                  log_eig_range: Tuple[float, float] = DEFAULT_LOG_EIG_RANGE) -> VerificationReport:
    """Miroir de sweep_symmetry : KL(g1||g2) = M, KL(g2||g1) >= infimum"""
    return _reverse_sweep("inf", m_list, dims, trials_per_cell, master_seed,
                          settings, bound_scale, log_eig_range)


# ============================================================================
# INÉGALITÉ TRIANGULAIRE
# ============================================================================

def _triangle_trial(eps1: float, eps2: float, dim: int, cell: int, index: int,
                    master_seed: int, bound: float,
                    log_eig_range: Tuple[float, float]) -> TrialRecord:
    seed = SeedSplitter.trial_seed(master_seed, cell, index)
    rng = SeedSplitter.rng(seed)
    middle = GaussianGenerator.random_gaussian(dim, rng, log_eig_range)
    first = GaussianGenerator.random_gaussian(dim, rng, log_eig_range)
    last = GaussianGenerator.random_gaussian(dim, rng, log_eig_range)

    first = calibrate_pair_to_kl(first, middle, eps1) if eps1 > 0 else middle
    last = calibrate_reference_to_kl(middle, last, eps2) if eps2 > 0 else middle
    return TrialRecord(
        seed=seed, dim=dim, cell=(eps1, eps2), trial_index=index,
        constraint_value=(kl(first, middle), kl(middle, last)),
        observed=kl(first, last), bound=bound,
        degenerate=(eps1 == 0 and eps2 == 0)
    )


def sweep_triangle(eps1_list: Sequence[float], eps2_list: Sequence[float], dims: Sequence[int],
                   trials_per_cell: int, master_seed: int,
                   settings: Optional[HarnessSettings] = None, bound_scale: float = 1.0,
                   log_eig_range: Tuple[float, float] = DEFAULT_LOG_EIG_RANGE) -> VerificationReport:
    """
    Triplets (N1, N2, N3) calibrés à KL(N1||N2) = eps1 et KL(N2||N3) = eps2 ;
    KL(N1||N3) doit rester strictement sous la borne. La cellule (0, 0) force
    N1 = N2 = N3 et n'entre pas dans le décompte des violations.
    """
    settings = _settings(settings)
    _check_sweep(list(eps1_list) + list(eps2_list), dims, trials_per_cell, "eps", strict=False)
    report = VerificationReport(
        suite="triangle", master_seed=master_seed,
        tolerance=settings.matrix_tolerance, sense=BoundSense.UPPER, strict=True
    )

    tasks: List[Callable[[], Outcome]] = []
    cells = itertools.product(eps1_list, eps2_list, dims)
    for cell, (eps1, eps2, dim) in enumerate(cells):
        bound = bound_scale * bounds.triangle_bound(eps1, eps2).value
        for index in range(trials_per_cell):
            trial = partial(_triangle_trial, eps1, eps2, dim, cell, index, master_seed,
                            bound, log_eig_range)
            where = f"cellule {cell} (eps1={eps1!r}, eps2={eps2!r}, dim={dim}) essai {index}"
            tasks.append(partial(_guarded, trial, where))

    return _collect(report, _execute(tasks, settings.threads))


# ============================================================================
# RÉPARTITION DES BUDGETS
# ============================================================================

@lru_cache(maxsize=65536)
def _cached_w2(t: float) -> float:
    return w2(t)


def allocation_value(objective: AllocationObjective) -> float:
    """S(theta_x, theta_y) ; les arguments de w2 sont ramenés à 0 s'ils passent sous 0"""
    ex2, ey2 = objective.eps_x2, objective.eps_y2
    a = max(0.0, objective.eps_x1 + objective.theta_x * ex2)
    b = max(0.0, objective.eps_y1 + objective.theta_y * ey2)
    rest_a = max(0.0, ex2 - objective.theta_x * ex2)
    rest_b = max(0.0, ey2 - objective.theta_y * ey2)
    return f(_cached_w2(a) * _cached_w2(b)) + f(_cached_w2(rest_a) * _cached_w2(rest_b))


def default_allocation_grid(values: int = 15, eps_max: float = 5.0) -> List[Tuple[float, float, float, float]]:
    """
    Quadruplets (ex1, ex2, ey1, ey2) avec ex1 >= ex2 et ey1 >= ey2 sur
    {0} U geomspace(1e-3, eps_max) ; 15 valeurs donnent 120 couples par axe.
    """
    base = [0.0] + [float(v) for v in np.geomspace(1e-3, eps_max, values - 1)]
    pairs = [(a, b) for a in base for b in base if a >= b]
    return [(x1, x2, y1, y2) for (x1, x2) in pairs for (y1, y2) in pairs]


def check_allocation_inequality(grid: Iterable[Sequence[float]], theta_points: int = 5,
                                settings: Optional[HarnessSettings] = None) -> VerificationReport:
    """
    S(0, 0) <= S(1, 1) pour chaque quadruplet, puis max de S sur une grille
    theta_points x theta_points du pavé admissible, toujours <= S(1, 1).
    Sans budget dans le second terme, S(0, 0) = S(1, 1) exactement : ces
    quadruplets sont des témoins.

    Raises:
        ValidationError: Si un quadruplet viole eps_x1 >= eps_x2 ou eps_y1 >= eps_y2
    """
    settings = _settings(settings)
    DimensionValidator.validate_or_raise(theta_points, "theta_points", minimum=2)
    report = VerificationReport(
        suite="allocation", master_seed=0, tolerance=settings.scalar_tolerance
    )
    for cell, params in enumerate(grid):
        objective = AllocationObjective(*(float(p) for p in params))
        AllocationValidator.validate_or_raise(objective)
        extreme = allocation_value(objective.with_theta(1.0, 1.0))
        start = allocation_value(objective)

        (low_x, high_x), (low_y, high_y) = objective.theta_box()
        scanned = max(
            allocation_value(objective.with_theta(tx, ty))
            for tx in np.linspace(low_x, high_x, theta_points)
            for ty in np.linspace(low_y, high_y, theta_points)
        )
        key = tuple(float(p) for p in params)
        report.trials.append(TrialRecord(
            seed=0, dim=2, cell=key, trial_index=0, constraint_value=key,
            observed=start, bound=extreme, is_witness=objective.is_case_one
        ))
        report.trials.append(TrialRecord(
            seed=0, dim=2, cell=key, trial_index=1, constraint_value=key,
            observed=scanned, bound=extreme, label="theta_scan"
        ))
    logger.info(report.summary())
    return report


# ============================================================================
# INÉGALITÉ DE TRACE ET INVARIANCE AFFINE
# ============================================================================

def _trace_trial(dim: int, index: int, master_seed: int,
                 log_eig_range: Tuple[float, float]) -> TrialRecord:
    seed = SeedSplitter.trial_seed(master_seed, 0, index)
    rng = SeedSplitter.rng(seed)
    a = GaussianGenerator.spd_from_rng(dim, rng, log_eig_range)
    b = GaussianGenerator.spd_from_rng(dim, rng, log_eig_range)
    eig_a = la.eigvalsh(a)[::-1]
    eig_b = la.eigvalsh(b)[::-1]
    return TrialRecord(
        seed=seed, dim=dim, cell=(float(dim),), trial_index=index, constraint_value=(),
        observed=float(np.sum(a * b.T)), bound=float(eig_a @ eig_b)
    )


def check_trace_inequality(dim: int, trials: int, master_seed: int,
                           settings: Optional[HarnessSettings] = None,
                           log_eig_range: Tuple[float, float] = DEFAULT_LOG_EIG_RANGE) -> VerificationReport:
    """Tr(AB) <= sum lambda_A[i] lambda_B[i] (valeurs propres décroissantes) pour A, B SPD aléatoires"""
    settings = _settings(settings)
    DimensionValidator.validate_or_raise(dim, "dim")
    DimensionValidator.validate_or_raise(trials, "trials")
    report = VerificationReport(suite="trace", master_seed=master_seed,
                                tolerance=settings.matrix_tolerance)
    tasks = [partial(_trace_trial, dim, i, master_seed, log_eig_range) for i in range(trials)]
    return _collect(report, _execute(tasks, settings.threads))


def _invariance_trial(dim: int, cell: int, index: int, master_seed: int) -> TrialRecord:
    seed = SeedSplitter.trial_seed(master_seed, cell, index)
    rng = SeedSplitter.rng(seed)
    g1 = GaussianGenerator.random_gaussian(dim, rng)
    g2 = GaussianGenerator.random_gaussian(dim, rng)
    transform = FrameGenerator.random_affine_map(dim, int(rng.integers(2 ** 63)))
    before = kl(g1, g2)
    after = kl(apply_affine(transform, g1), apply_affine(transform, g2))
    return TrialRecord(
        seed=seed, dim=dim, cell=(float(dim),), trial_index=index, constraint_value=(before,),
        observed=abs(after - before) / (1.0 + before), bound=0.0
    )


def check_affine_invariance(dims: Sequence[int], trials: int, master_seed: int,
                            settings: Optional[HarnessSettings] = None) -> VerificationReport:
    """KL(T g1 || T g2) = KL(g1 || g2) pour des applications affines communes aléatoires"""
    settings = _settings(settings)
    _check_sweep([], dims, trials, "dim")
    report = VerificationReport(suite="invariance", master_seed=master_seed,
                                tolerance=settings.matrix_tolerance)
    tasks = [partial(_invariance_trial, dim, cell, i, master_seed)
             for cell, dim in enumerate(dims) for i in range(trials)]
    return _collect(report, _execute(tasks, settings.threads))


# ============================================================================
# LEMMES SCALAIRES
# ============================================================================

class _ScalarLedger:
    """Accumule les contrôles scalaires sous la forme observé <= borne"""

    def __init__(self, seed: int):
        self.seed = seed
        self.records: List[TrialRecord] = []
        self._counters: dict = {}

    def add(self, label: str, params: Sequence[float], observed: float, bound: float) -> None:
        index = self._counters.get(label, 0)
        self._counters[label] = index + 1
        key = tuple(float(p) for p in params)
        self.records.append(TrialRecord(
            seed=self.seed, dim=1, cell=key, trial_index=index, constraint_value=key,
            observed=float(observed), bound=float(bound), label=label
        ))

    def equal(self, label: str, params: Sequence[float], residual: float) -> None:
        """Égalité attendue : |résidu| <= 0 à la tolérance près"""
        self.add(label, params, abs(residual), 0.0)

    def derivative(self, label: str, t: float, func: Callable[[float], float],
                   exact: float) -> None:
        """Différence finie centrée, pas min(1e-6, 1e-3 t)"""
        h = min(1e-6, 1e-3 * t)
        estimate = (func(t + h) - func(t - h)) / (2.0 * h)
        self.add(label, (t,), abs(estimate - exact) / max(abs(exact), 1e-300), FD_ALLOWANCE)


def _relative(a: float, b: float) -> float:
    return (a - b) / max(1.0, abs(b))


def _root_checks(ledger: _ScalarLedger, grid: GridSpec, rng: np.random.Generator) -> None:
    ts = np.linspace(0.0, grid.t_max, grid.points)
    positive = ts[1:]
    xs = np.geomspace(grid.x_min, grid.x_max, grid.points)

    for x in xs:
        fx = f(x)
        ledger.add("f_minimum", (x,), 1.0, fx)
        h = 0.1 * x
        second = f(x + h) - 2.0 * fx + f(x - h)
        ledger.add("f_convexity", (x,), -second / max(1.0, fx), 0.0)
        if x > 1:
            ledger.add("f_reciprocal_order", (x,), f(1.0 / x), fx)
        elif x < 1:
            ledger.add("f_reciprocal_order", (x,), fx, f(1.0 / x))
        ledger.add("f_prime", (x,), abs(f_prime(x) - (1.0 - 1.0 / x)), 0.0)

    for t in ts:
        lower, upper = w1(t), w2(t)
        ledger.equal("w1_oracle", (t,), lower - root_oracle(t, RootSide.LOWER))
        ledger.equal("w2_oracle", (t,), _relative(upper, root_oracle(t, RootSide.UPPER)))
        ledger.equal("w1_residual", (t,), _relative(f(lower), 1.0 + t))
        ledger.equal("w2_residual", (t,), _relative(f(upper), 1.0 + t))
        ledger.add("w2_slope_comparison", (t,), f_prime(upper), -f_prime(1.0 / upper))
        ledger.add("root_gap_order", (t,), g_l(t), g_r(t))

        sup_map, inf_map = scalar_sup_map(t), scalar_inf_map(t)
        for u in rng.uniform(0.0, 1.0, size=3):
            inside = lower + u * (upper - lower)
            ledger.add("reciprocal_sup", (t,), f(1.0 / inside), sup_map)
            ledger.add("reciprocal_inf", (t,), inf_map, f(1.0 / (upper * (1.0 + 9.0 * u))))
            ledger.add("reciprocal_inf", (t,), inf_map, f(1.0 / (lower * (0.1 + 0.9 * u))))

    for t in positive:
        lower, upper = w1(t), w2(t)
        ledger.add("root_reciprocal_order", (t,), f(lower), f(1.0 / lower))
        ledger.add("root_reciprocal_order", (t,), f(1.0 / upper), f(upper))
        ledger.derivative("w1_derivative", t, w1, w1_prime(t))
        ledger.derivative("w2_derivative", t, w2, w2_prime(t))

    pair_grid = np.linspace(0.0, grid.eps_max, grid.pair_points)
    for t1, t2 in itertools.product(pair_grid, pair_grid):
        for side in (RootSide.UPPER, RootSide.LOWER):
            left, right = f_product_identity_check(t1, t2, side)
            ledger.equal(f"product_identity_{side.value}", (t1, t2), _relative(left, right))


def _product_checks(ledger: _ScalarLedger, grid: GridSpec, rng: np.random.Generator) -> None:
    pair_grid = np.linspace(0.0, grid.eps_max, grid.pair_points)
    for ex, ey in itertools.product(pair_grid, pair_grid):
        bound = f(w2(ex) * w2(ey))
        for _ in range(3):
            x = rng.uniform(w1(ex), w2(ex))
            y = rng.uniform(w1(ey), w2(ey))
            ledger.add("product_bound", (ex, ey), f(x * y), bound)


def _delta_checks(ledger: _ScalarLedger, grid: GridSpec) -> None:
    budgets = np.linspace(0.0, grid.eps_max, grid.pair_points)[1:]
    fractions = np.linspace(0.0, 0.9, 10)
    previous_sup = previous_inf = 0.0
    for e in budgets:
        value_sup, value_inf = delta_sup(e), delta_inf(e)
        ledger.add("delta_sup_increasing", (e,), previous_sup, value_sup)
        ledger.add("delta_inf_increasing", (e,), previous_inf, value_inf)
        previous_sup, previous_inf = value_sup, value_inf
        for s in fractions:
            ledger.add("delta_sup_convexity", (e, s), delta_sup(s * e), s * value_sup)
            ledger.add("delta_inf_convexity", (e, s), delta_inf(s * e), s * value_inf)
        ledger.derivative("g_l_prime", e, g_l, g_l_prime(e))
        ledger.derivative("g_r_prime", e, g_r, g_r_prime(e))
        ledger.derivative("delta_sup_prime", e, delta_sup, delta_sup_prime(e))
        ledger.derivative("delta_sup_second", e, delta_sup_prime, delta_sup_second(e))
        ledger.add("delta_sup_second_positive", (e,), -delta_sup_second(e), 0.0)

    a, b = 0.2, 2.0
    ledger.add("delta_sup_midpoint", (a, b), delta_sup(0.5 * (a + b)),
               0.5 * (delta_sup(a) + delta_sup(b)))


def _nary_checks(ledger: _ScalarLedger, grid: GridSpec, rng: np.random.Generator) -> None:
    for _ in range(grid.allocations):
        n = int(rng.integers(1, 11))
        budget = float(rng.uniform(0.0, grid.eps_max))
        shares = budget * rng.dirichlet(np.ones(n))
        ledger.add("nary_sup", (budget, n),
                   sum(scalar_sup_map(e) for e in shares), bounds.nary_sup_bound(budget, n))
        ledger.add("nary_inf", (budget, n),
                   bounds.nary_inf_bound(budget, n), sum(scalar_inf_map(e) for e in shares))


def _bound_checks(ledger: _ScalarLedger, grid: GridSpec) -> None:
    budgets = np.geomspace(1e-6, grid.t_max, grid.points)
    previous = None
    for eps in budgets:
        sup = bounds.sup_reverse_kl(eps).value
        inf = bounds.inf_reverse_kl(eps).value
        ledger.add("sup_asymmetry", (eps,), eps, sup)
        ledger.add("inf_asymmetry", (eps,), inf, eps)
        ledger.equal("sup_forms", (eps,), _relative(sup, bounds.sup_reverse_kl_lambert(eps)))
        ledger.equal("scalar_sup_map_identity", (eps,),
                     _relative(scalar_sup_map(2.0 * eps), 1.0 + 2.0 * sup))
        if previous is not None:
            ledger.add("sup_increasing", (eps,), previous[0], sup)
            ledger.add("inf_increasing", (eps,), previous[1], inf)
        previous = (sup, inf)

    for m in np.geomspace(1e-3, 20.0, grid.points):
        ledger.add("duality", (m,), abs(bounds.dual_roundtrip(m) - m) / m, 1e-9)

    pair_grid = np.linspace(0.0, grid.eps_max, grid.pair_points)
    for e1, e2 in itertools.product(pair_grid, pair_grid):
        value = bounds.triangle_bound(e1, e2).value
        ledger.equal("triangle_forms", (e1, e2), _relative(bounds.triangle_bound_lambert(e1, e2), value))
        for n in (1, 7):
            ledger.equal("triangle_standard", (e1, e2, n),
                         _relative(bounds.triangle_bound_standard(e1, e2, n), value))


def _series_checks(ledger: _ScalarLedger, grid: GridSpec) -> None:
    count = max(10, grid.points // 4)
    for eps in np.geomspace(grid.series_min, grid.series_max, count):
        x = -math.exp(-(1.0 + 2.0 * eps))
        root = math.sqrt(eps)
        principal = lambert_w(Branch.PRINCIPAL, x)
        minus_one = lambert_w(Branch.MINUS_ONE, x)
        ledger.add("w0_series", (eps,), abs(principal - (-1.0 + 2.0 * root - 4.0 * eps / 3.0)), eps * root)
        ledger.add("wm1_series", (eps,), abs(minus_one - (-1.0 - 2.0 * root - 4.0 * eps / 3.0)), eps * root)
        ledger.add("w0_branch_series", (eps,),
                   abs(principal - lambert_w_branch_series(Branch.PRINCIPAL, eps)), eps * eps)
        ledger.add("wm1_branch_series", (eps,),
                   abs(minus_one - lambert_w_branch_series(Branch.MINUS_ONE, eps)), eps * eps)

        sup = bounds.sup_reverse_kl(eps).value
        ledger.add("sup_series", (eps,), abs(sup - bounds.sup_reverse_kl_series(eps)), eps * root)
        ledger.add("sup_expansion", (eps,), abs(sup - bounds.sup_reverse_kl_expansion(eps)), 10.0 * eps * eps)

        triangle = bounds.triangle_bound(eps, eps).value
        ledger.add("triangle_series", (eps,),
                   abs(triangle - bounds.triangle_bound_series(eps, eps)), 30.0 * eps * root)


def check_scalar_lemmas(grid_spec: Optional[GridSpec] = None,
                        settings: Optional[HarnessSettings] = None) -> VerificationReport:
    """
    Tous les invariants scalaires : calcul de f, racines w1/w2 contre la
    dichotomie, dérivées contre différences finies, encadrements de f(1/x),
    f(xy), convexité des fonctions Delta, bornes n-aires sur répartitions
    aléatoires, formes équivalentes des bornes et restes des développements.

    Raises:
        ValidationError: Si la grille est mal formée
    """
    grid = grid_spec if grid_spec is not None else GridSpec()
    GridValidator.validate_or_raise(grid)
    settings = _settings(settings)
    rng = np.random.default_rng(grid.seed)
    ledger = _ScalarLedger(grid.seed)

    _root_checks(ledger, grid, rng)
    _product_checks(ledger, grid, rng)
    _delta_checks(ledger, grid)
    _nary_checks(ledger, grid, rng)
    _bound_checks(ledger, grid)
    _series_checks(ledger, grid)

    report = VerificationReport(suite="scalar", master_seed=grid.seed,
                                tolerance=settings.scalar_tolerance, trials=ledger.records)
    logger.info(report.summary())
    return report

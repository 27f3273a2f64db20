# ============================================================================
# Modèles de données
# ============================================================================
"""
Modèles de données pour gaussian-kl-bounds.
Représentation pure des objets manipulés par les modules de calcul (Model dans MVC).
"""
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


# ============================================================================
# EXCEPTIONS - Erreurs personnalisées
# ============================================================================

class ValidationError(Exception):
    """
    Exception levée lors d'une erreur de validation de données.
    Utilisée par les validateurs pour signaler des données invalides.
    """
    pass


class DimensionMismatchError(ValidationError):
    """Deux objets de dimensions différentes combinés dans une même opération"""
    pass


class IllConditionedError(ValidationError):
    """Matrice trop mal conditionnée pour un calcul significatif en double précision"""
    pass


class DomainError(ValueError):
    """Argument scalaire hors du domaine mathématique de la fonction"""
    pass


class NumericalError(ArithmeticError):
    """Échec numérique (factorisation, sous-dépassement, calibration impossible)"""
    pass


# ============================================================================
# ENUMS - Types énumérés
# ============================================================================

class Branch(Enum):
    """Branches réelles de la fonction W de Lambert"""
    PRINCIPAL = "W0"      # image [-1, +inf)
    MINUS_ONE = "W-1"     # image (-inf, -1]


class RootSide(Enum):
    """Racine choisie pour f(x) = 1 + t"""
    LOWER = "lower"   # (0, 1]
    UPPER = "upper"   # [1, +inf)


class BoundKind(Enum):
    """Nature d'une borne calculée"""
    SUP_REVERSE = "sup_reverse"
    INF_REVERSE = "inf_reverse"
    TRIANGLE = "triangle"
    NARY_SUP = "nary_sup"
    NARY_INF = "nary_inf"


class PairKind(Enum):
    """Type de paire extrémale"""
    SUP_ATTAINER = "sup"
    INF_ATTAINER = "inf"


class BoundSense(Enum):
    """Sens de l'inégalité vérifiée par un rapport"""
    UPPER = "upper"   # observé <= borne
    LOWER = "lower"   # observé >= borne


# ============================================================================
# DATACLASSES - Modèles de données
# ============================================================================

@dataclass(frozen=True)
class EpsilonBudget:
    """Marge t >= 0 au-dessus du minimum de f(x) = x - log x"""
    t: float

    def __post_init__(self):
        if not isinstance(self.t, (int, float)) or not math.isfinite(self.t):
            raise DomainError(f"Budget invalide : {self.t!r} (valeur finie attendue)")
        if self.t < 0:
            raise DomainError(f"Budget négatif : t = {self.t!r}")

    def __float__(self) -> float:
        return float(self.t)


def _freeze(array: np.ndarray) -> np.ndarray:
    """Copie en lecture seule"""
    frozen = np.array(array, dtype=float, copy=True)
    frozen.setflags(write=False)
    return frozen


@dataclass(frozen=True)
class Gaussian:
    """
    Gaussienne multivariée N(mean, cov).

    Ne pas construire directement : utiliser gaussian.make_gaussian, qui valide
    la covariance et calcule le facteur de Cholesky.
    """
    mean: np.ndarray
    cov: np.ndarray
    chol: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'mean', _freeze(self.mean))
        object.__setattr__(self, 'cov', _freeze(self.cov))
        object.__setattr__(self, 'chol', _freeze(self.chol))

    @property
    def dim(self) -> int:
        """Dimension n"""
        return int(self.mean.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        """Convertit en document JSON {"mean": [...], "cov": [[...]]}"""
        return {
            'mean': [float(v) for v in self.mean],
            'cov': [[float(v) for v in row] for row in self.cov]
        }


@dataclass(frozen=True)
class Spectrum:
    """Factorisation propre cov = P diag(lambda) P^T, valeurs propres décroissantes"""
    frame: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'frame', _freeze(self.frame))
        object.__setattr__(self, 'eigenvalues', _freeze(self.eigenvalues))

    def reconstruct(self) -> np.ndarray:
        """Recompose P diag(lambda) P^T"""
        return (self.frame * self.eigenvalues) @ self.frame.T


@dataclass(frozen=True)
class AffineMap:
    """Application affine x -> linear @ x + offset (inversible)"""
    linear: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'linear', _freeze(self.linear))
        object.__setattr__(self, 'offset', _freeze(self.offset))

    @property
    def dim(self) -> int:
        return int(self.offset.shape[0])

    def condition(self) -> float:
        """Estimation du conditionnement de la partie linéaire"""
        return float(np.linalg.cond(self.linear))

    def inverse(self) -> 'AffineMap':
        """Application réciproque x -> A^-1 (x - b)"""
        inv = np.linalg.inv(self.linear)
        return AffineMap(linear=inv, offset=-inv @ self.offset)

    def compose(self, inner: 'AffineMap') -> 'AffineMap':
        """self o inner"""
        return AffineMap(
            linear=self.linear @ inner.linear,
            offset=self.linear @ inner.offset + self.offset
        )


@dataclass(frozen=True)
class BoundResult:
    """Valeur d'une borne et recette d'atteinte"""
    value: float
    kind: BoundKind
    extremal_eigenvalue: Optional[float] = None
    strict: bool = False

    def __post_init__(self):
        if math.isnan(self.value) or self.value < 0:
            raise ValidationError(f"Valeur de borne invalide : {self.value!r}")
        needs_eigenvalue = self.kind in (BoundKind.SUP_REVERSE, BoundKind.INF_REVERSE)
        if needs_eigenvalue != (self.extremal_eigenvalue is not None):
            raise ValidationError(
                f"Valeur propre extrémale incohérente pour une borne {self.kind.value}"
            )
        if self.kind == BoundKind.SUP_REVERSE and not 0 < self.extremal_eigenvalue <= 1:
            raise ValidationError("La valeur propre extrémale d'un supremum doit être dans (0, 1]")
        if self.kind == BoundKind.INF_REVERSE and self.extremal_eigenvalue < 1:
            raise ValidationError("La valeur propre extrémale d'un infimum doit être >= 1")

    def to_dict(self) -> Dict[str, Any]:
        """Convertit en dictionnaire"""
        return {
            'value': self.value,
            'kind': self.kind.value,
            'extremal_eigenvalue': self.extremal_eigenvalue,
            'strict': self.strict
        }


@dataclass(frozen=True)
class ExtremalPair:
    """Paire de gaussiennes atteignant une borne (g1 contraint, g2 référence)"""
    forward_constraint: float
    g1: Gaussian
    g2: Gaussian
    kind: PairKind

    def to_documents(self) -> List[Dict[str, Any]]:
        """Tableau de deux documents JSON gaussiens"""
        return [self.g1.to_dict(), self.g2.to_dict()]


@dataclass(frozen=True)
class TrialRecord:
    """Résultat d'un essai de vérification"""
    seed: int
    dim: int
    cell: Tuple[float, ...]
    trial_index: int
    constraint_value: Tuple[float, ...]
    observed: float
    bound: float
    is_witness: bool = False
    degenerate: bool = False
    label: str = ""

    @property
    def margin(self) -> float:
        """Toujours borne - observé, sans écrêtage"""
        return self.bound - self.observed


@dataclass
class VerificationReport:
    """
    Rapport de vérification : essais, violations, témoins d'atteinte.
    Les essais sont rangés dans l'ordre (cellule, indice d'essai).
    """
    suite: str
    master_seed: int
    tolerance: float
    sense: BoundSense = BoundSense.UPPER
    strict: bool = False
    trials: List[TrialRecord] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)

    def scale(self, record: TrialRecord) -> float:
        """Échelle de tolérance max(1, |borne|)"""
        return max(1.0, abs(record.bound))

    def is_violation(self, record: TrialRecord) -> bool:
        """Vrai si l'essai contredit l'inégalité vérifiée"""
        if record.degenerate:
            return False
        threshold = self.tolerance * self.scale(record)
        if self.sense == BoundSense.LOWER:
            return record.margin > threshold
        if self.strict:
            return record.margin <= -threshold
        return record.margin < -threshold

    def is_witness_failure(self, record: TrialRecord) -> bool:
        """Un témoin doit atteindre la borne à la tolérance près, en absolu"""
        return record.is_witness and abs(record.margin) > self.tolerance

    @property
    def violations(self) -> int:
        return sum(1 for r in self.trials if self.is_violation(r))

    @property
    def witness_failures(self) -> int:
        return sum(1 for r in self.trials if self.is_witness_failure(r))

    @property
    def min_margin(self) -> float:
        """Marge minimale sur les essais (nan si aucun essai)"""
        if not self.trials:
            return math.nan
        return min(r.margin for r in self.trials)

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.witness_failures == 0

    def tightness(self) -> Dict[Tuple[Tuple[float, ...], int], float]:
        """Meilleur rapport observé/borne par (cellule, dimension), témoins exclus"""
        best: Dict[Tuple[Tuple[float, ...], int], float] = {}
        for r in self.trials:
            if r.is_witness or r.degenerate or r.bound <= 0:
                continue
            key = (r.cell, r.dim)
            best[key] = max(best.get(key, 0.0), r.observed / r.bound)
        return best

    def summary(self) -> str:
        """Ligne de synthèse pour la sortie standard"""
        return (
            f"{self.suite}: {len(self.trials)} essai(s), {self.violations} violation(s), "
            f"{self.witness_failures} témoin(s) en échec, {len(self.skipped)} ignoré(s), "
            f"marge min = {self.min_margin:.17g}"
        )


@dataclass(frozen=True)
class AllocationObjective:
    """
    Paramètres de la fonction S(theta_x, theta_y) de répartition des budgets :
    f(w2(ex1 + tx ex2) w2(ey1 + ty ey2)) + f(w2(ex2 - tx ex2) w2(ey2 - ty ey2)).
    """
    eps_x1: float
    eps_x2: float
    eps_y1: float
    eps_y2: float
    theta_x: float = 0.0
    theta_y: float = 0.0

    def with_theta(self, theta_x: float, theta_y: float) -> 'AllocationObjective':
        """Même budget, autre répartition"""
        return AllocationObjective(
            self.eps_x1, self.eps_x2, self.eps_y1, self.eps_y2, theta_x, theta_y
        )

    def theta_box(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        """Domaine admissible de (theta_x, theta_y)"""
        low_x = -self.eps_x1 / self.eps_x2 if self.eps_x2 > 0 else 0.0
        low_y = -self.eps_y1 / self.eps_y2 if self.eps_y2 > 0 else 0.0
        return (low_x, 1.0), (low_y, 1.0)

    @property
    def is_case_one(self) -> bool:
        """Aucun budget dans le second terme : S(0,0) = S(1,1) exactement"""
        return self.eps_x2 == 0 and self.eps_y2 == 0


@dataclass
class GridSpec:
    """Grilles des vérifications scalaires"""
    t_max: float = 50.0
    points: int = 200
    x_min: float = 1e-6
    x_max: float = 1e6
    eps_max: float = 5.0
    pair_points: int = 11
    series_min: float = 1e-8
    series_max: float = 1e-2
    allocations: int = 200
    seed: int = 0

    def to_dict(self) -> Dict[str, Any]:
        """Convertit en dictionnaire"""
        return dict(self.__dict__)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GridSpec':
        """Crée depuis un dictionnaire (clés inconnues refusées)"""
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValidationError(f"Paramètre(s) de grille inconnu(s) : {', '.join(sorted(unknown))}")
        spec = cls()
        for key, value in data.items():
            expected = type(getattr(spec, key))
            if expected is int:
                if float(value) != int(value):
                    raise ValidationError(f"Le paramètre de grille '{key}' doit être entier")
                value = int(value)
            setattr(spec, key, expected(value))
        return spec


@dataclass
class HarnessSettings:
    """Réglages du banc de vérification"""
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    matrix_tolerance: float = 1e-8
    scalar_tolerance: float = 1e-10

    ENV_THREADS = "GKB_THREADS"

    def to_dict(self) -> Dict[str, Any]:
        """Convertit en dictionnaire"""
        return {
            'threads': self.threads,
            'matrix_tolerance': self.matrix_tolerance,
            'scalar_tolerance': self.scalar_tolerance
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'HarnessSettings':
        """Crée depuis un dictionnaire"""
        defaults = cls()
        return cls(
            threads=data.get('threads', defaults.threads),
            matrix_tolerance=data.get('matrix_tolerance', 1e-8),
            scalar_tolerance=data.get('scalar_tolerance', 1e-10)
        )

    @classmethod
    def from_env(cls, environ: Optional[Dict[str, str]] = None) -> 'HarnessSettings':
        """Lit GKB_THREADS (entier positif), sinon le parallélisme de la machine"""
        environ = os.environ if environ is None else environ
        raw = environ.get(cls.ENV_THREADS)
        if raw is None or not raw.strip():
            return cls()
        try:
            threads = int(raw)
        except ValueError:
            raise ValidationError(f"{cls.ENV_THREADS} doit être un entier positif (reçu '{raw}')")
        if threads < 1:
            raise ValidationError(f"{cls.ENV_THREADS} doit être un entier positif (reçu '{raw}')")
        return cls(threads=threads)

# ============================================================================
# Validation des données
# ============================================================================
"""
Validateurs pour les données d'entrée (gaussiennes, budgets, applications
affines, répartitions, grilles).
Séparation de la logique de validation.
"""
import math
from typing import Any, Sequence, Tuple

import numpy as np

from .models import (
    AffineMap, AllocationObjective, DimensionMismatchError, GridSpec,
    IllConditionedError, ValidationError
)

SYMMETRY_TOLERANCE = 1e-12


def _is_real(value: Any) -> bool:
    return isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool)


class GaussianValidator:
    """Valide la moyenne et la covariance d'une gaussienne"""

    @staticmethod
    def validate(mean: Any, cov: Any) -> Tuple[bool, str]:
        """
        Valide une paire (moyenne, covariance).

        Returns:
            (is_valid, error_message)
        """
        try:
            mean = np.asarray(mean, dtype=float)
            cov = np.asarray(cov, dtype=float)
        except (TypeError, ValueError):
            return False, "mean et cov doivent être des tableaux numériques (lignes de même longueur)"

        if mean.ndim != 1 or mean.shape[0] < 1:
            return False, "mean doit être un vecteur non vide"

        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            return False, f"cov doit être une matrice carrée (forme reçue {cov.shape})"

        if cov.shape[0] != mean.shape[0]:
            return False, (f"Dimensions incompatibles : mean de longueur {mean.shape[0]}, "
                           f"cov de taille {cov.shape[0]}x{cov.shape[1]}")

        if not np.all(np.isfinite(mean)):
            return False, "mean contient des valeurs non finies"

        if not np.all(np.isfinite(cov)):
            return False, "cov contient des valeurs non finies"

        scale = max(1.0, float(np.max(np.abs(cov))))
        asymmetry = float(np.max(np.abs(cov - cov.T)))
        if asymmetry > SYMMETRY_TOLERANCE * scale:
            return False, f"cov n'est pas symétrique (écart {asymmetry:.3e})"

        return True, ""

    @staticmethod
    def validate_or_raise(mean: Any, cov: Any) -> None:
        """Valide ou lève une exception (DimensionMismatchError pour les tailles)"""
        is_valid, error = GaussianValidator.validate(mean, cov)
        if not is_valid:
            if error.startswith("Dimensions incompatibles"):
                raise DimensionMismatchError(error)
            raise ValidationError(error)


class BudgetValidator:
    """Valide un budget de divergence (eps, M)"""

    @staticmethod
    def validate(value: Any, name: str = "eps", strict: bool = False) -> Tuple[bool, str]:
        """
        Args:
            value: Valeur du budget
            name: Nom du paramètre (pour le message)
            strict: Exige value > 0
        """
        if not _is_real(value) or not math.isfinite(value):
            return False, f"{name} doit être un réel fini"

        if strict and value <= 0:
            return False, f"{name} doit être strictement positif"

        if value < 0:
            return False, f"{name} doit être positif ou nul"

        return True, ""

    @staticmethod
    def validate_or_raise(value: Any, name: str = "eps", strict: bool = False) -> None:
        """Valide ou lève une exception"""
        is_valid, error = BudgetValidator.validate(value, name, strict)
        if not is_valid:
            raise ValidationError(error)


class DimensionValidator:
    """Valide une dimension ou un nombre d'essais"""

    @staticmethod
    def validate(value: Any, name: str = "dim", minimum: int = 1) -> Tuple[bool, str]:
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            return False, f"{name} doit être un entier"

        if value < minimum:
            return False, f"{name} doit être >= {minimum}"

        return True, ""

    @staticmethod
    def validate_or_raise(value: Any, name: str = "dim", minimum: int = 1) -> None:
        """Valide ou lève une exception"""
        is_valid, error = DimensionValidator.validate(value, name, minimum)
        if not is_valid:
            raise ValidationError(error)


class AffineMapValidator:
    """Valide une application affine avant un changement de repère"""

    DEFAULT_MAX_CONDITION = 1e8

    @staticmethod
    def validate(transform: AffineMap, dim: int,
                 max_condition: float = DEFAULT_MAX_CONDITION) -> Tuple[bool, str]:
        """
        Args:
            transform: Application à valider
            dim: Dimension attendue
            max_condition: Conditionnement maximal accepté
        """
        if transform.linear.shape != (dim, dim) or transform.offset.shape != (dim,):
            return False, (f"Application de forme {transform.linear.shape} incompatible "
                           f"avec la dimension {dim}")

        if not (np.all(np.isfinite(transform.linear)) and np.all(np.isfinite(transform.offset))):
            return False, "L'application contient des valeurs non finies"

        condition = transform.condition()
        if not math.isfinite(condition) or condition > max_condition:
            return False, f"Application mal conditionnée : {condition:.3e} > {max_condition:.0e}"

        return True, ""

    @staticmethod
    def validate_or_raise(transform: AffineMap, dim: int,
                          max_condition: float = DEFAULT_MAX_CONDITION) -> None:
        """Valide ou lève l'exception adaptée"""
        is_valid, error = AffineMapValidator.validate(transform, dim, max_condition)
        if not is_valid:
            if error.startswith("Application de forme"):
                raise DimensionMismatchError(error)
            if error.startswith("Application mal conditionnée"):
                raise IllConditionedError(error)
            raise ValidationError(error)


class AllocationValidator:
    """Valide les paramètres de la fonction de répartition S(theta_x, theta_y)"""

    @staticmethod
    def validate(objective: AllocationObjective) -> Tuple[bool, str]:
        budgets = (objective.eps_x1, objective.eps_x2, objective.eps_y1, objective.eps_y2)
        if any(not _is_real(b) or not math.isfinite(b) or b < 0 for b in budgets):
            return False, "Les budgets de répartition doivent être des réels finis >= 0"

        if objective.eps_x1 < objective.eps_x2:
            return False, "eps_x1 doit être >= eps_x2"

        if objective.eps_y1 < objective.eps_y2:
            return False, "eps_y1 doit être >= eps_y2"

        (low_x, high_x), (low_y, high_y) = objective.theta_box()
        if not low_x <= objective.theta_x <= high_x:
            return False, f"theta_x = {objective.theta_x!r} hors de [{low_x!r}, {high_x!r}]"

        if not low_y <= objective.theta_y <= high_y:
            return False, f"theta_y = {objective.theta_y!r} hors de [{low_y!r}, {high_y!r}]"

        return True, ""

    @staticmethod
    def validate_or_raise(objective: AllocationObjective) -> None:
        """Valide ou lève une exception"""
        is_valid, error = AllocationValidator.validate(objective)
        if not is_valid:
            raise ValidationError(error)


class RangeValidator:
    """Valide un intervalle [low, high] (plages log-spectrales, plages d'eps)"""

    @staticmethod
    def validate(low: Any, high: Any, name: str = "plage",
                 bounds: Tuple[float, float] = (-math.inf, math.inf),
                 positive: bool = False) -> Tuple[bool, str]:
        if not (_is_real(low) and _is_real(high)) or not (math.isfinite(low) and math.isfinite(high)):
            return False, f"{name} : bornes réelles finies attendues"

        if positive and low <= 0:
            return False, f"{name} : la borne inférieure doit être strictement positive"

        if low > high:
            return False, f"{name} : borne inférieure {low!r} > borne supérieure {high!r}"

        if low < bounds[0] or high > bounds[1]:
            return False, f"{name} : [{low!r}, {high!r}] sort de [{bounds[0]!r}, {bounds[1]!r}]"

        return True, ""

    @staticmethod
    def validate_or_raise(low: Any, high: Any, name: str = "plage",
                          bounds: Tuple[float, float] = (-math.inf, math.inf),
                          positive: bool = False) -> None:
        """Valide ou lève une exception"""
        is_valid, error = RangeValidator.validate(low, high, name, bounds, positive)
        if not is_valid:
            raise ValidationError(error)


class GridValidator:
    """Valide une spécification de grilles scalaires"""

    @staticmethod
    def validate(grid: GridSpec) -> Tuple[bool, str]:
        if not grid.t_max > 0:
            return False, "t_max doit être strictement positif"

        if grid.points < 2 or grid.pair_points < 2:
            return False, "points et pair_points doivent être >= 2"

        if not 0 < grid.x_min < 1 < grid.x_max:
            return False, "Il faut 0 < x_min < 1 < x_max"

        if not grid.eps_max > 0:
            return False, "eps_max doit être strictement positif"

        if not 0 < grid.series_min < grid.series_max <= 1e-2:
            return False, "Il faut 0 < series_min < series_max <= 1e-2"

        if grid.allocations < 1:
            return False, "allocations doit être >= 1"

        if grid.seed < 0:
            return False, "seed doit être positif ou nul"

        return True, ""

    @staticmethod
    def validate_or_raise(grid: GridSpec) -> None:
        """Valide ou lève une exception"""
        is_valid, error = GridValidator.validate(grid)
        if not is_valid:
            raise ValidationError(error)


def parse_float_list(text: str, name: str) -> Sequence[float]:
    """Liste '0.1,0.5,2' -> [0.1, 0.5, 2.0]"""
    items = [item.strip() for item in text.split(',') if item.strip()]
    if not items:
        raise ValidationError(f"{name} : liste vide")
    try:
        return [float(item) for item in items]
    except ValueError:
        raise ValidationError(f"{name} : liste de réels attendue (reçu '{text}')")

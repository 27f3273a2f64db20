# ============================================================================
# Contrôleur principal (Controller dans MVC)
# ============================================================================
"""
Contrôleur de l'outil en ligne de commande : enchaîne lecture des fichiers,
calcul des divergences et des bornes, construction des paires extrémales et
campagnes de vérification. La vue (cli) ne fait qu'analyser les options et
afficher.
"""
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core import bounds, verify
from ..core.extremal import embed_in_frame, extremal_inf_pair, extremal_sup_pair
from ..core.gaussian import kl
from ..core.generators import FrameGenerator
from ..core.models import (
    BoundResult, ExtremalPair, GridSpec, HarnessSettings,
    ValidationError, VerificationReport
)
from ..core.serializers import GaussianSerializer, ReportSerializer
from ..core.validators import DimensionValidator, RangeValidator
from ..utils.safe_eval import SafeEvaluator

logger = logging.getLogger(__name__)

SUITES = ("symmetry", "infimum", "triangle", "allocation", "trace", "scalar", "invariance")
ALLOCATION_GRID_KEYS = ("values", "eps_max")


class BoundsController:
    """Contrôleur principal : une instance par invocation"""

    def __init__(self, settings: Optional[HarnessSettings] = None):
        self.settings = settings if settings is not None else HarnessSettings.from_env()
        self.last_report: Optional[VerificationReport] = None
        self._evaluator = SafeEvaluator()

    # ========== DIVERGENCES ==========

    def compute_kl(self, path1: Path, path2: Path) -> Tuple[float, float]:
        """
        KL directe et inverse entre deux documents gaussiens.

        Raises:
            ValidationError: Document illisible ou invalide
            DimensionMismatchError: Dimensions différentes
        """
        g1 = GaussianSerializer.load(path1)
        g2 = GaussianSerializer.load(path2)
        return kl(g1, g2), kl(g2, g1)

    # ========== BORNES ==========

    def compute_bound(self, kind: str, eps: Optional[float] = None, m: Optional[float] = None,
                      eps1: Optional[float] = None, eps2: Optional[float] = None,
                      series: bool = False) -> Tuple[float, Optional[float]]:
        """
        Valeur de la borne demandée et, pour sup/inf, la valeur propre extrémale.

        Raises:
            ValidationError: Paramètre manquant pour ce type de borne
            DomainError: Paramètre hors domaine
        """
        if kind == "sup":
            eps = self._required(eps, "--eps", kind)
            if series:
                return bounds.sup_reverse_kl_series(eps), None
            return self._with_eigenvalue(bounds.sup_reverse_kl(eps))

        if kind == "inf":
            m = self._required(m, "--M", kind)
            if series:
                raise ValidationError("Pas de développement en série pour la borne inf")
            return self._with_eigenvalue(bounds.inf_reverse_kl(m))

        if kind == "triangle":
            eps1 = self._required(eps1, "--eps1", kind)
            eps2 = self._required(eps2, "--eps2", kind)
            if series:
                return bounds.triangle_bound_series(eps1, eps2), None
            return bounds.triangle_bound(eps1, eps2).value, None

        raise ValidationError(f"Type de borne inconnu : {kind}")

    @staticmethod
    def _required(value: Optional[float], flag: str, kind: str) -> float:
        if value is None:
            raise ValidationError(f"L'option {flag} est obligatoire pour la borne {kind}")
        return value

    @staticmethod
    def _with_eigenvalue(result: BoundResult) -> Tuple[float, Optional[float]]:
        return result.value, result.extremal_eigenvalue

    # ========== PAIRES EXTRÉMALES ==========

    def build_extremal(self, kind: str, budget: float, dim: int,
                       frame_seed: Optional[int] = None) -> ExtremalPair:
        """Paire extrémale canonique, ou plongée dans un repère aléatoire si frame_seed est donné"""
        if kind == "sup":
            pair = extremal_sup_pair(budget, dim)
        elif kind == "inf":
            pair = extremal_inf_pair(budget, dim)
        else:
            raise ValidationError(f"Type de paire inconnu : {kind}")

        if frame_seed is not None:
            pair = embed_in_frame(pair, FrameGenerator.random_affine_map(dim, frame_seed))
        return pair

    def export_extremal(self, pair: ExtremalPair, out: Path) -> Tuple[float, float]:
        """
        Écrit la paire et renvoie (KL directe, KL inverse) atteintes.

        Raises:
            IOError: En cas d'erreur d'écriture
        """
        GaussianSerializer.save(pair, out)
        return kl(pair.g1, pair.g2), kl(pair.g2, pair.g1)

    # ========== VÉRIFICATION ==========

    def parse_grid(self, expression: Optional[str]) -> dict:
        """Spécification 'clé=valeur, ...' évaluée par SafeEvaluator"""
        if not expression:
            return {}
        return self._evaluator.eval_dict(expression)

    def run_verification(self, suite: str, seed: int = 0,
                         eps: Sequence[float] = (0.01, 0.5, 2.0),
                         m: Sequence[float] = (0.01, 0.5, 2.0),
                         eps1: Sequence[float] = (1e-3, 0.1, 1.0),
                         eps2: Sequence[float] = (1e-3, 0.1, 1.0),
                         dims: Sequence[int] = (1, 5, 20),
                         trials: int = 100, dim: int = 5,
                         grid: Optional[str] = None, theta_points: int = 5,
                         bound_scale: float = 1.0) -> VerificationReport:
        """
        Lance une suite de vérification.

        Raises:
            ValidationError: Suite inconnue ou paramètres invalides
        """
        if suite not in SUITES:
            raise ValidationError(f"Suite inconnue : {suite}")
        logger.info("Suite %s, graine %d, %d thread(s)", suite, seed, self.settings.threads)

        if suite == "symmetry":
            report = verify.sweep_symmetry(eps, dims, trials, seed, self.settings, bound_scale)
        elif suite == "infimum":
            report = verify.sweep_infimum(m, dims, trials, seed, self.settings, bound_scale)
        elif suite == "triangle":
            report = verify.sweep_triangle(eps1, eps2, dims, trials, seed, self.settings, bound_scale)
        elif suite == "allocation":
            report = verify.check_allocation_inequality(
                self._allocation_grid(grid), theta_points, self.settings
            )
        elif suite == "trace":
            report = verify.check_trace_inequality(dim, trials, seed, self.settings)
        elif suite == "invariance":
            report = verify.check_affine_invariance(dims, trials, seed, self.settings)
        else:
            values = self.parse_grid(grid)
            values.setdefault('seed', seed)
            report = verify.check_scalar_lemmas(GridSpec.from_dict(values), self.settings)

        self.last_report = report
        return report

    def _allocation_grid(self, expression: Optional[str]) -> List[Tuple[float, float, float, float]]:
        values = self.parse_grid(expression)
        unknown = set(values) - set(ALLOCATION_GRID_KEYS)
        if unknown:
            raise ValidationError(f"Paramètre(s) de grille inconnu(s) : {', '.join(sorted(unknown))}")
        count = values.get('values', 15)
        if float(count) != int(count):
            raise ValidationError("Le paramètre de grille 'values' doit être entier")
        DimensionValidator.validate_or_raise(int(count), "values", minimum=2)
        eps_max = float(values.get('eps_max', 5.0))
        RangeValidator.validate_or_raise(1e-3, eps_max, "eps_max", positive=True)
        return verify.default_allocation_grid(int(count), eps_max)

    def save_report(self, report: VerificationReport, out: Path) -> None:
        """Écrit le rapport CSV (IOError en cas d'échec)"""
        ReportSerializer.save(report, out)

    # ========== DONNÉES DE TRACÉ ==========

    def plot_data(self, eps_min: float, eps_max: float, points: int) -> List[Tuple[float, float, float]]:
        """
        Supremum et série eps + 2 eps^1.5 sur une grille logarithmique.

        Raises:
            ValidationError: Si 0 < eps_min < eps_max ou points >= 2 n'est pas respecté
        """
        RangeValidator.validate_or_raise(eps_min, eps_max, "eps", positive=True)
        if eps_min == eps_max:
            raise ValidationError("eps : il faut eps_min < eps_max")
        DimensionValidator.validate_or_raise(points, "points", minimum=2)
        return [
            (float(e), bounds.sup_reverse_kl(float(e)).value, bounds.sup_reverse_kl_series(float(e)))
            for e in np.geomspace(eps_min, eps_max, points)
        ]

    def export_plot_data(self, rows: Sequence[Tuple[float, float, float]], out: Path) -> None:
        ReportSerializer.save_plot_data(rows, out)

# ============================================================================
# Sérialisation/Désérialisation
# ============================================================================
"""
Lecture des documents JSON gaussiens, écriture des paires extrémales et des
rapports CSV.

Toutes les écritures passent par un fichier temporaire renommé en cas de
succès : aucun fichier partiel ne reste après une erreur.
"""
import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Union

from .gaussian import make_gaussian
from .models import ExtremalPair, Gaussian, ValidationError, VerificationReport

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

REPORT_HEADER = (
    "master_seed", "suite", "cell", "trial", "dim",
    "constraint_value", "observed", "bound", "margin"
)
PLOT_HEADER = ("eps", "sup_bound", "series")


def format_number(value: float) -> str:
    """17 chiffres significatifs : relecture exacte du double"""
    return format(float(value), '.17g')


def _format_tuple(values: Sequence[float]) -> str:
    return ";".join(format_number(v) for v in values)


def atomic_write(filepath: PathLike, text: str) -> None:
    """
    Écrit text dans filepath via un fichier temporaire du même répertoire.

    Raises:
        IOError: En cas d'erreur d'écriture
    """
    target = Path(filepath)
    temporary = None
    try:
        with tempfile.NamedTemporaryFile(
            'w', encoding='utf-8', newline='', dir=target.parent,
            prefix=f".{target.name}.", suffix=".tmp", delete=False
        ) as handle:
            temporary = handle.name
            handle.write(text)
        os.replace(temporary, target)
        logger.debug("Fichier écrit : %s", target)
    except OSError as e:
        if temporary is not None and os.path.exists(temporary):
            os.unlink(temporary)
        raise IOError(f"Erreur lors de l'écriture de {target}: {e}")


class GaussianSerializer:
    """Documents JSON {"mean": [...], "cov": [[...], ...]}"""

    @staticmethod
    def from_document(data: Any, where: str = "document") -> Gaussian:
        """
        Construit une gaussienne depuis un document déjà décodé.

        Raises:
            ValidationError: Champ manquant, lignes de longueurs différentes, covariance invalide
            DimensionMismatchError: Si mean et cov n'ont pas la même dimension
        """
        if not isinstance(data, dict):
            raise ValidationError(f"{where} : objet JSON attendu")

        for key in ('mean', 'cov'):
            if key not in data:
                raise ValidationError(f"{where} : champ '{key}' manquant")

        unknown = set(data) - {'mean', 'cov'}
        if unknown:
            raise ValidationError(f"{where} : champ(s) inconnu(s) {', '.join(sorted(unknown))}")

        mean, cov = data['mean'], data['cov']
        if not isinstance(mean, list):
            raise ValidationError(f"{where} : le champ 'mean' doit être une liste")
        if not isinstance(cov, list) or not all(isinstance(row, list) for row in cov):
            raise ValidationError(f"{where} : le champ 'cov' doit être une liste de lignes")
        if len({len(row) for row in cov}) > 1:
            raise ValidationError(f"{where} : le champ 'cov' a des lignes de longueurs différentes")

        try:
            return make_gaussian(mean, cov)
        except ValidationError as e:
            raise type(e)(f"{where} : {e}")

    @staticmethod
    def _read(filepath: PathLike) -> Any:
        try:
            with open(filepath, 'r', encoding='utf-8') as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise ValidationError(f"Fichier JSON invalide {filepath}: {e}")
        except OSError as e:
            raise ValidationError(f"Lecture impossible de {filepath}: {e}")

    @staticmethod
    def load(filepath: PathLike) -> Gaussian:
        """
        Charge une gaussienne depuis un fichier JSON.

        Raises:
            ValidationError: Si le fichier est illisible ou invalide
        """
        return GaussianSerializer.from_document(GaussianSerializer._read(filepath), str(filepath))

    @staticmethod
    def load_many(filepath: PathLike) -> List[Gaussian]:
        """Charge un tableau de documents (par exemple une paire extrémale)"""
        data = GaussianSerializer._read(filepath)
        if not isinstance(data, list):
            raise ValidationError(f"{filepath} : tableau de documents attendu")
        return [
            GaussianSerializer.from_document(item, f"{filepath}[{i}]")
            for i, item in enumerate(data)
        ]

    @staticmethod
    def save(documents: Union[Gaussian, ExtremalPair], filepath: PathLike) -> None:
        """
        Sauvegarde une gaussienne (document) ou une paire (tableau de deux documents).

        Raises:
            IOError: En cas d'erreur d'écriture
        """
        if isinstance(documents, ExtremalPair):
            data: Any = documents.to_documents()
        else:
            data = documents.to_dict()
        atomic_write(filepath, json.dumps(data, indent=4) + "\n")


class ReportSerializer:
    """Rapports CSV (UTF-8, séparateur décimal '.', en-tête obligatoire)"""

    @staticmethod
    def report_rows(report: VerificationReport) -> Iterable[List[str]]:
        """Lignes du rapport, dans l'ordre (cellule, essai)"""
        for record in report.trials:
            suite = f"{report.suite}:{record.label}" if record.label else report.suite
            yield [
                str(report.master_seed),
                suite,
                _format_tuple(record.cell),
                str(record.trial_index),
                str(record.dim),
                _format_tuple(record.constraint_value),
                format_number(record.observed),
                format_number(record.bound),
                format_number(record.margin),
            ]

    @staticmethod
    def to_csv(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buffer.getvalue()

    @staticmethod
    def save(report: VerificationReport, filepath: PathLike) -> None:
        """
        Sauvegarde le rapport au format CSV.

        Raises:
            IOError: En cas d'erreur d'écriture
        """
        text = ReportSerializer.to_csv(REPORT_HEADER, ReportSerializer.report_rows(report))
        atomic_write(filepath, text)
        logger.info("Rapport %s écrit (%d lignes) : %s", report.suite, len(report.trials), filepath)

    @staticmethod
    def save_plot_data(rows: Iterable[Sequence[float]], filepath: PathLike) -> None:
        """Colonnes eps, sup_bound, series"""
        formatted = ([format_number(v) for v in row] for row in rows)
        atomic_write(filepath, ReportSerializer.to_csv(PLOT_HEADER, formatted))

    @staticmethod
    def load_rows(filepath: PathLike) -> List[dict]:
        """Relit un CSV écrit par ce module (lignes sous forme de dictionnaires)"""
        try:
            with open(filepath, 'r', encoding='utf-8', newline='') as f:
                return list(csv.DictReader(f))
        except OSError as e:
            raise IOError(f"Erreur lors du chargement de {filepath}: {e}")

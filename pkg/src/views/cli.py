# ============================================================================
# Interface en ligne de commande (View dans MVC)
# ============================================================================
"""
Point d'entrée en ligne de commande : sous-commandes kl, bound, extremal,
verify et plot-data.

Codes de sortie :
    0  succès
    1  au moins une violation (ou un témoin d'atteinte en échec)
    2  erreur d'analyse, de validation ou de domaine
    3  dimensions incompatibles
    4  échec d'écriture du fichier de sortie
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from ..controllers.bounds_controller import SUITES, BoundsController
from ..core.models import (
    DimensionMismatchError, DomainError, HarnessSettings, NumericalError, ValidationError,
    VerificationReport
)
from ..core.serializers import format_number
from ..core.validators import DimensionValidator, parse_float_list

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2
EXIT_DIMENSION = 3
EXIT_WRITE = 4


def _float_list(text: str) -> List[float]:
    try:
        return list(parse_float_list(text, "liste"))
    except ValidationError as e:
        raise argparse.ArgumentTypeError(str(e))


def _int_list(text: str) -> List[int]:
    values = _float_list(text)
    if any(v != int(v) for v in values):
        raise argparse.ArgumentTypeError(f"liste d'entiers attendue (reçu '{text}')")
    return [int(v) for v in values]


def build_parser() -> argparse.ArgumentParser:
    """Construit l'analyseur (options inconnues refusées par argparse)"""
    parser = argparse.ArgumentParser(
        prog="gkb",
        description="Bornes sur la divergence KL entre gaussiennes multivariées"
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Journalisation détaillée")
    parser.add_argument("--threads", type=int, default=None,
                        help="Nombre de threads du banc (remplace GKB_THREADS)")
    commands = parser.add_subparsers(dest="command", required=True)

    kl_parser = commands.add_parser("kl", help="KL directe et inverse entre deux fichiers JSON")
    kl_parser.add_argument("file1", type=Path)
    kl_parser.add_argument("file2", type=Path)

    bound = commands.add_parser("bound", help="Valeur d'une borne")
    bound.add_argument("kind", choices=("sup", "inf", "triangle"))
    bound.add_argument("--eps", type=float)
    bound.add_argument("--M", dest="m", type=float)
    bound.add_argument("--eps1", type=float)
    bound.add_argument("--eps2", type=float)
    bound.add_argument("--series", action="store_true", help="Développement pour petits budgets")

    extremal = commands.add_parser("extremal", help="Paire de gaussiennes atteignant une borne")
    extremal.add_argument("kind", choices=("sup", "inf"))
    extremal.add_argument("--eps", type=float)
    extremal.add_argument("--M", dest="m", type=float)
    extremal.add_argument("--dim", type=int, required=True)
    extremal.add_argument("--out", type=Path, required=True)
    extremal.add_argument("--frame-seed", type=int, default=None)

    check = commands.add_parser("verify", help="Campagne de vérification")
    check.add_argument("suite", choices=SUITES)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--csv", type=Path, default=None)
    check.add_argument("--eps", type=_float_list, default=[0.01, 0.5, 2.0])
    check.add_argument("--M", dest="m", type=_float_list, default=[0.01, 0.5, 2.0])
    check.add_argument("--eps1", type=_float_list, default=[1e-3, 0.1, 1.0])
    check.add_argument("--eps2", type=_float_list, default=[1e-3, 0.1, 1.0])
    check.add_argument("--dims", type=_int_list, default=[1, 5, 20])
    check.add_argument("--dim", type=int, default=5, help="Dimension (suite trace)")
    check.add_argument("--trials", type=int, default=100)
    check.add_argument("--grid", type=str, default=None,
                       help="Grille 'clé=valeur, ...' (suites scalar et allocation)")
    check.add_argument("--theta-points", type=int, default=5)
    check.add_argument("--corrupt-bound", type=float, default=1.0, help=argparse.SUPPRESS)

    plot = commands.add_parser("plot-data", help="Supremum et série sur une grille logarithmique")
    plot.add_argument("--eps-min", type=float, required=True)
    plot.add_argument("--eps-max", type=float, required=True)
    plot.add_argument("--points", type=int, required=True)
    plot.add_argument("--out", type=Path, required=True)

    return parser


def configure_logging(verbose: bool) -> None:
    """Configuration unique de la journalisation, sur stderr"""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True
    )


def _settings(threads: Optional[int]) -> HarnessSettings:
    settings = HarnessSettings.from_env()
    if threads is not None:
        DimensionValidator.validate_or_raise(threads, "--threads")
        settings.threads = threads
    return settings


# ========== COMMANDES ==========

def cmd_kl(controller: BoundsController, args: argparse.Namespace) -> int:
    forward, reverse = controller.compute_kl(args.file1, args.file2)
    print(f"forward {format_number(forward)}")
    print(f"reverse {format_number(reverse)}")
    return EXIT_OK


def cmd_bound(controller: BoundsController, args: argparse.Namespace) -> int:
    value, eigenvalue = controller.compute_bound(
        args.kind, eps=args.eps, m=args.m, eps1=args.eps1, eps2=args.eps2, series=args.series
    )
    print(f"bound {format_number(value)}")
    if eigenvalue is not None:
        print(f"extremal_eigenvalue {format_number(eigenvalue)}")
    return EXIT_OK


def cmd_extremal(controller: BoundsController, args: argparse.Namespace) -> int:
    budget = args.eps if args.kind == "sup" else args.m
    if budget is None:
        flag = "--eps" if args.kind == "sup" else "--M"
        raise ValidationError(f"L'option {flag} est obligatoire pour la paire {args.kind}")
    pair = controller.build_extremal(args.kind, budget, args.dim, args.frame_seed)
    forward, reverse = controller.export_extremal(pair, args.out)
    print(f"forward {format_number(forward)}")
    print(f"reverse {format_number(reverse)}")
    return EXIT_OK


def _print_tightness(report: VerificationReport) -> None:
    """Meilleur rapport observé/borne par cellule, une ligne par (eps1, eps2, dim)"""
    for (cell, dim), ratio in sorted(report.tightness().items()):
        budgets = " ".join(f"eps{i}={format_number(v)}" for i, v in enumerate(cell, start=1))
        print(f"tightness {budgets} dim={dim} ratio={format_number(ratio)}")


def cmd_verify(controller: BoundsController, args: argparse.Namespace) -> int:
    report = controller.run_verification(
        args.suite, seed=args.seed, eps=args.eps, m=args.m, eps1=args.eps1, eps2=args.eps2,
        dims=args.dims, trials=args.trials, dim=args.dim, grid=args.grid,
        theta_points=args.theta_points, bound_scale=args.corrupt_bound
    )
    if args.csv is not None:
        controller.save_report(report, args.csv)
    print(report.summary())
    if report.suite == "triangle":
        _print_tightness(report)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_plot_data(controller: BoundsController, args: argparse.Namespace) -> int:
    rows = controller.plot_data(args.eps_min, args.eps_max, args.points)
    controller.export_plot_data(rows, args.out)
    print(f"{len(rows)} ligne(s) écrite(s) dans {args.out}")
    return EXIT_OK


COMMANDS = {
    "kl": cmd_kl,
    "bound": cmd_bound,
    "extremal": cmd_extremal,
    "verify": cmd_verify,
    "plot-data": cmd_plot_data,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Exécute une commande et renvoie le code de sortie"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INVALID

    configure_logging(args.verbose)
    try:
        controller = BoundsController(_settings(args.threads))
        return COMMANDS[args.command](controller, args)
    except DimensionMismatchError as e:
        print(f"Erreur de dimension : {e}", file=sys.stderr)
        return EXIT_DIMENSION
    except (ValidationError, DomainError, NumericalError) as e:
        print(f"Erreur : {e}", file=sys.stderr)
        return EXIT_INVALID
    except IOError as e:
        print(f"Erreur d'écriture : {e}", file=sys.stderr)
        return EXIT_WRITE
    except ValueError as e:
        print(f"Erreur : {e}", file=sys.stderr)
        return EXIT_INVALID

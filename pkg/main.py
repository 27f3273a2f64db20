# ============================================================================
# Point d'entrée de l'application
# ============================================================================
"""
Point d'entrée de l'outil gaussian-kl-bounds.
Délègue à l'interface en ligne de commande.
"""
import sys

from src.views.cli import main


if __name__ == "__main__":
    sys.exit(main())

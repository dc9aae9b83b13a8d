"""
Non-localité de Bell
Point d'entrée principal de l'outil en ligne de commande
"""

import os
import sys

# Ajouter le dossier src au path pour les imports
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from cli.cli_main import main  # noqa: E402


if __name__ == "__main__":
    sys.exit(main())

"""Main entry point for the SemiLab system.

This module lets the whole repository run as ``python -m <repo>`` or
``python __main__.py``; it delegates to the CLI.
"""
import os
import sys

# Ajouter le répertoire parent au chemin de recherche de Python
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

from cli.__main__ import main


if __name__ == "__main__":
    sys.exit(main())

"""
Configuration de la journalisation
"""

import logging
from typing import Optional

from config.settings import get_config, is_debug_mode


def setup_logging(level: Optional[str] = None) -> None:
    """Configurer le logger racine à partir de la section logging"""
    config = get_config("logging")
    if level is None:
        level = "DEBUG" if is_debug_mode() else config["level"]

    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        format=config["format"],
        datefmt=config["datefmt"],
        force=True
    )

"""
Hiérarchie des exceptions de la boîte à outils
"""

from typing import Optional


class NonLocalityError(Exception):
    """Erreur de base de la boîte à outils"""


class DomainError(NonLocalityError, ValueError):
    """Paramètre hors domaine ou précondition non respectée"""


class CapacityError(NonLocalityError):
    """Scénario trop grand pour être énuméré"""


class ScenarioMismatchError(NonLocalityError, ValueError):
    """Objets définis sur des scénarios différents"""


class SolverError(NonLocalityError):
    """Échec numérique du solveur linéaire"""

    def __init__(self, message: str, diagnostic: Optional[str] = None):
        super().__init__(message)
        self.diagnostic = diagnostic

    def __str__(self) -> str:
        base = super().__str__()
        if self.diagnostic:
            return f"{base} ({self.diagnostic})"
        return base


class ParseError(NonLocalityError):
    """Fichier mal formé"""

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        super().__init__(message)
        self.line = line
        self.path = path

    def __str__(self) -> str:
        base = super().__str__()
        location = self.path or "<texte>"
        if self.line is not None:
            return f"{location}:{self.line}: {base}"
        return f"{location}: {base}"

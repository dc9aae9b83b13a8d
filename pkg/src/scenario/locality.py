"""
Test d'appartenance au polytope local
"""

import logging
from typing import Optional, Tuple

import numpy as np

from config.settings import get_tolerance
from data.models import Behavior, StrategyMatrix
from lp.engine import solve
from lp.programs import assemble_locality_program
from utils.errors import SolverError

logger = logging.getLogger(__name__)


def is_local(
    behavior: Behavior,
    strategies: StrategyMatrix,
    tol: Optional[float] = None
) -> Tuple[bool, Optional[np.ndarray]]:
    """
    Chercher λ ≥ 0, Σλ = 1 avec A·λ = q à tol près

    Returns:
        (local, λ) ; λ vaut None si q n'est pas local
    """
    if tol is None:
        tol = get_tolerance("feasibility_tolerance")

    solution = solve(assemble_locality_program(behavior, strategies))
    if not solution.is_optimal:
        raise SolverError("Le programme d'appartenance n'a pas d'optimum", solution.status.value)

    deviation = float(solution.objective)
    logger.debug("Écart maximal au polytope local : %.3e", deviation)
    if deviation > tol:
        return False, None

    weights = np.clip(solution.primal[1:], 0.0, None)
    return True, weights / weights.sum()

"""
Contenu non local (décomposition EPR2) et son minorant par violation de Bell
"""

import logging
from typing import Optional

from data.models import Behavior, BellFunctional, StrategyMatrix
from inequalities.functionals import evaluate, local_bound, ns_bound
from lp.engine import solve
from lp.programs import assemble_content_program
from scenario.strategies import enumerate_strategies
from utils.errors import DomainError, SolverError

logger = logging.getLogger(__name__)


def nonlocal_content(behavior: Behavior, strategies: Optional[StrategyMatrix] = None) -> float:
    """w̃ = 1 - max{Σλ : λ ≥ 0, A·λ ≤ q}"""
    if strategies is None:
        strategies = enumerate_strategies(behavior.scenario)

    solution = solve(assemble_content_program(behavior, strategies))
    if not solution.is_optimal:
        raise SolverError("Le programme de contenu local n'a pas d'optimum", solution.status.value)

    local_weight = -float(solution.objective)
    return min(1.0, max(0.0, 1.0 - local_weight))


def bell_lower_bound_content(
    functional: BellFunctional,
    behavior: Behavior,
    strategies: Optional[StrategyMatrix] = None
) -> float:
    """
    Minorant (f·q - I_L)/(I_NS - I_L) du contenu non local, ramené à 0 si négatif

    Raises:
        DomainError: I_NS ≤ I_L, la fonctionnelle ne sépare pas les polytopes
    """
    classical = local_bound(functional, strategies)
    nonsignaling = ns_bound(functional)
    if nonsignaling - classical <= 1e-12:
        raise DomainError(
            f"{functional.label} : borne non signalante {nonsignaling:g} "
            f"non supérieure à la borne locale {classical:g}"
        )

    ratio = (evaluate(functional, behavior) - classical) / (nonsignaling - classical)
    logger.debug("Minorant de contenu non local par %s : %.6g", functional.label, ratio)
    return max(0.0, ratio)

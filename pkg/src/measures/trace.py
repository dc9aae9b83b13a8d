"""
Non-localité mesurée par la distance de trace au polytope local
"""

import logging
from typing import Optional, Tuple

import numpy as np

from data.models import (
    Behavior, BellFunctional, Certificate, ConstrainedNLResult, InputDistribution,
    NLResult, SolveStatus, StrategyMatrix
)
from inequalities.families import count_negative_settings
from inequalities.functionals import CHSH_SCENARIO, chsh_orbit, evaluate
from lp.engine import LPSolution, solve
from lp.programs import assemble_constrained_nl_program, assemble_nl_program, distance_weights
from scenario.behaviors import is_nonsignaling, validate_behavior
from scenario.strategies import enumerate_strategies
from utils.errors import DomainError, SolverError

logger = logging.getLogger(__name__)


def trace_distance(q: np.ndarray, p: np.ndarray) -> float:
    """D(q, p) = ½ Σ |q - p| entre deux distributions jointes"""
    q = np.asarray(q, dtype=float).ravel()
    p = np.asarray(p, dtype=float).ravel()
    if q.size != p.size:
        raise DomainError(f"Distributions de tailles différentes : {q.size} et {p.size}")
    return 0.5 * float(np.abs(q - p).sum())


def _defaults(
    behavior: Behavior,
    distribution: Optional[InputDistribution],
    strategies: Optional[StrategyMatrix]
) -> Tuple[InputDistribution, StrategyMatrix]:
    if distribution is None:
        distribution = InputDistribution.uniform(behavior.scenario)
    if strategies is None:
        strategies = enumerate_strategies(behavior.scenario)
    return distribution, strategies


def _require_valid(behavior: Behavior) -> None:
    report = validate_behavior(behavior)
    if not report.is_valid:
        raise DomainError(
            "Comportement invalide : " + "; ".join(error.message for error in report.errors)
        )


def _strategy_weights(values: np.ndarray) -> np.ndarray:
    weights = np.clip(values, 0.0, None)
    return weights / weights.sum()


def _solve_nl(
    behavior: Behavior,
    distribution: InputDistribution,
    strategies: StrategyMatrix
) -> LPSolution:
    _require_valid(behavior)
    solution = solve(assemble_nl_program(behavior, strategies, distribution))
    if not solution.is_optimal:
        raise SolverError("Le programme NL n'a pas d'optimum", solution.status.value)
    return solution


def nl(
    behavior: Behavior,
    distribution: Optional[InputDistribution] = None,
    strategies: Optional[StrategyMatrix] = None
) -> NLResult:
    """
    Distance de trace minimale entre π·q et les comportements locaux π·p

    Args:
        behavior: comportement q
        distribution: distribution des entrées (uniforme par défaut)
        strategies: matrice des stratégies (énumérée par défaut)

    Returns:
        NLResult avec la valeur et le point local le plus proche A·λ*

    Raises:
        DomainError: comportement invalide
        SolverError: échec du programme linéaire
    """
    distribution, strategies = _defaults(behavior, distribution, strategies)
    solution = _solve_nl(behavior, distribution, strategies)

    n = behavior.scenario.dimension
    weights = _strategy_weights(solution.primal[n:])
    value = max(0.0, float(solution.objective))
    logger.debug("NL = %.10g (%d itérations)", value, solution.iterations)
    return NLResult(
        value=value,
        closest_local=strategies.combine(weights),
        strategy_weights=weights,
        iterations=solution.iterations
    )


def nl_given_value(
    functional: BellFunctional,
    target: float,
    distribution: Optional[InputDistribution] = None,
    strategies: Optional[StrategyMatrix] = None
) -> ConstrainedNLResult:
    """NL minimale parmi les comportements non signalants tels que f·q = c"""
    scenario = functional.scenario
    if distribution is None:
        distribution = InputDistribution.uniform(scenario)
    if strategies is None:
        strategies = enumerate_strategies(scenario)

    solution = solve(assemble_constrained_nl_program(functional, target, strategies, distribution))
    if solution.status != SolveStatus.OPTIMAL:
        logger.info("%s = %g hors de portée (%s)", functional.label, target, solution.status.value)
        return ConstrainedNLResult(status=solution.status, target=target)

    n, m = strategies.matrix.shape
    weights = _strategy_weights(solution.primal[n:n + m])
    behavior = Behavior(scenario=scenario, values=np.clip(solution.primal[n + m:], 0.0, None))
    return ConstrainedNLResult(
        status=SolveStatus.OPTIMAL,
        target=target,
        value=max(0.0, float(solution.objective)),
        behavior=behavior,
        closest_local=strategies.combine(weights)
    )


def chsh_closed_form(behavior: Behavior) -> float:
    """NL = ½ max(0, max des 8 images de CHSH), valable pour q non signalant"""
    if behavior.scenario != CHSH_SCENARIO:
        raise DomainError("La forme close ne vaut que pour le scénario (2,2,2,2)")
    if not is_nonsignaling(behavior):
        raise DomainError("La forme close suppose un comportement non signalant")

    best = max(evaluate(functional, behavior) for functional in chsh_orbit())
    return 0.5 * max(0.0, best)


def dual_certificate(
    behavior: Behavior,
    distribution: Optional[InputDistribution] = None,
    strategies: Optional[StrategyMatrix] = None
) -> Certificate:
    """
    Certificat dual v avec NL(q) = Σ_j w_j v_j q_j - max_i Σ_j w_j v_j A_ji

    Les multiplicateurs m1, m2 des deux blocs -t ≤ q - A·λ ≤ t vérifient
    m1 + m2 = w ; v = (m1 - m2)/w là où w > 0, 0 ailleurs.
    """
    distribution, strategies = _defaults(behavior, distribution, strategies)
    solution = _solve_nl(behavior, distribution, strategies)

    n = behavior.scenario.dimension
    first = -solution.ub_duals[:n]
    second = -solution.ub_duals[n:2 * n]
    weights = distance_weights(distribution)

    v = np.zeros(n)
    positive = weights > 0
    v[positive] = np.clip((first - second)[positive] / weights[positive], -1.0, 1.0)

    weighted = weights * v
    strategy_max = float((strategies.matrix.T @ weighted).max())
    value = float(np.dot(weighted, behavior.values)) - strategy_max

    gap = abs(value - float(solution.objective))
    if gap > 1e-7:
        logger.warning("Certificat : écart %.2e avec la valeur primale", gap)
    return Certificate(
        scenario=behavior.scenario,
        v=v,
        weights=weights,
        value=value,
        strategy_max=strategy_max
    )


def mermin_nl_analytic(parties: int, visibility: float) -> float:
    """
    v·α_N/2^N pour le mélange v·q_max + (1-v)·u (N pair, entrées uniformes)

    C'est la distance au point de comparaison v·p_max + (1-v)·u ; elle
    majore NL et lui est égale en v = 0 et v = 1.
    """
    if not 0.0 <= visibility <= 1.0:
        raise DomainError(f"La visibilité doit être dans [0, 1], reçu {visibility}")
    return visibility * count_negative_settings(parties) / 2 ** parties

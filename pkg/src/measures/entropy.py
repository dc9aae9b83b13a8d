"""
Mesure de non-localité par entropie relative et borne de Pinsker

La minimisation de KL(π·q ‖ π·A·λ) sur le simplexe des λ utilise
l'algorithme de Frank-Wolfe avec pas d'éloignement (away steps) : l'oracle
linéaire est la meilleure colonne de A, la recherche linéaire résout
φ'(γ) = 0 par brentq.
"""

import logging
from typing import Optional

import numpy as np
from scipy.optimize import brentq
from scipy.special import rel_entr

from config.settings import KL_CONFIG
from data.models import Behavior, InputDistribution, KLResult, StrategyMatrix
from scenario.strategies import enumerate_strategies
from utils.errors import DomainError

logger = logging.getLogger(__name__)

LOG2_E = 1.0 / np.log(2.0)


def kl_divergence(q: np.ndarray, p: np.ndarray) -> float:
    """
    KL(q ‖ p) en bits, avec 0·log(0/p) = 0

    Returns:
        +inf si q_j > 0 alors que p_j = 0
    """
    q = np.asarray(q, dtype=float).ravel()
    p = np.asarray(p, dtype=float).ravel()
    if q.size != p.size:
        raise DomainError(f"Distributions de tailles différentes : {q.size} et {p.size}")
    return float(rel_entr(q, p).sum() * LOG2_E)


def pinsker_bound(nl_value: float) -> float:
    """4·C·NL² avec C = ½ log₂ e"""
    if not 0.0 <= nl_value <= 1.0:
        raise DomainError(f"NL doit être dans [0, 1], reçu {nl_value}")
    return 2.0 * LOG2_E * nl_value ** 2


def weighted_kl(behavior: Behavior, local: Behavior, distribution: InputDistribution) -> float:
    """Σ_x π(x) KL(q(·|x) ‖ p(·|x)) en bits"""
    return _Objective(behavior, distribution).value(local.values)


def kl_upper_bound(
    behavior: Behavior,
    local: Behavior,
    distribution: Optional[InputDistribution] = None
) -> float:
    """Majorant de min KL : entropie relative pondérée vers un point local donné"""
    if distribution is None:
        distribution = InputDistribution.uniform(behavior.scenario)
    return weighted_kl(behavior, local, distribution)


class _Objective:
    """F(p) = Σ_j c_j log₂(q_j/p_j) restreint au support c_j = π_j q_j > 0"""

    def __init__(self, behavior: Behavior, distribution: InputDistribution):
        self.weights = distribution.entry_weights()
        self.q = behavior.values
        self.mask = self.weights * self.q > 0
        self.c = (self.weights * self.q)[self.mask]

    def value(self, p: np.ndarray) -> float:
        terms = rel_entr(self.q[self.mask], p[self.mask])
        return float(np.dot(self.weights[self.mask], terms) * LOG2_E)

    def gradient(self, p: np.ndarray) -> np.ndarray:
        g = np.zeros_like(p)
        g[self.mask] = -self.c / p[self.mask] * LOG2_E
        return g

    def derivative(self, p: np.ndarray, d: np.ndarray, gamma: float) -> float:
        """φ'(γ) pour φ(γ) = F(p + γ d)"""
        return float(-np.sum(self.c * d[self.mask] / (p[self.mask] + gamma * d[self.mask])) * LOG2_E)

    def boundary_step(self, p: np.ndarray, d: np.ndarray) -> float:
        """Premier γ annulant un p_j du support (inf s'il n'y en a pas)"""
        pm, dm = p[self.mask], d[self.mask]
        decreasing = dm < 0
        if not decreasing.any():
            return np.inf
        return float((pm[decreasing] / -dm[decreasing]).min())


def _line_search(objective: _Objective, p: np.ndarray, d: np.ndarray, gamma_max: float) -> float:
    if objective.derivative(p, d, 0.0) >= 0:
        return 0.0

    boundary = objective.boundary_step(p, d)
    if boundary <= gamma_max * (1.0 + 1e-9):
        upper = min(boundary, gamma_max) * (1.0 - 1e-12)
    else:
        upper = gamma_max
    if objective.derivative(p, d, upper) <= 0:
        return upper
    return brentq(lambda g: objective.derivative(p, d, g), 0.0, upper,
                  xtol=KL_CONFIG["line_search_xtol"])


def nl_kl(
    behavior: Behavior,
    distribution: Optional[InputDistribution] = None,
    strategies: Optional[StrategyMatrix] = None,
    gap_tolerance: Optional[float] = None,
    max_iterations: Optional[int] = None
) -> KLResult:
    """
    min_λ KL(π·q ‖ π·A·λ) par Frank-Wolfe avec pas d'éloignement

    Partant du barycentre des colonnes, l'itération s'arrête dès que
    l'écart de dualité de Frank-Wolfe passe sous gap_tolerance ; sinon
    l'écart atteint est reporté avec converged = False.

    Returns:
        KLResult : valeur pondérée par π, valeur sans préfacteur
        Σ_x KL(q(·|x) ‖ p(·|x)), minimiseur, écart et nombre d'itérations
    """
    if distribution is None:
        distribution = InputDistribution.uniform(behavior.scenario)
    if strategies is None:
        strategies = enumerate_strategies(behavior.scenario)
    if gap_tolerance is None:
        gap_tolerance = KL_CONFIG["gap_tolerance"]
    if max_iterations is None:
        max_iterations = KL_CONFIG["max_iterations"]

    objective = _Objective(behavior, distribution)
    matrix = strategies.matrix
    columns = strategies.column_count

    lam = np.full(columns, 1.0 / columns)
    p = np.asarray(matrix @ lam).ravel()
    gap = np.inf
    iteration = 0

    while iteration < max_iterations:
        g = objective.gradient(p)
        scores = np.asarray(matrix.T @ g).ravel()
        g_dot_p = float(np.dot(g, p))

        toward = int(np.argmin(scores))
        gap = g_dot_p - float(scores[toward])
        if gap <= gap_tolerance:
            break

        active = np.flatnonzero(lam > 0)
        away = int(active[np.argmax(scores[active])])
        away_gap = float(scores[away]) - g_dot_p

        if gap >= away_gap or lam[away] >= 1.0:
            d = matrix[:, toward].toarray().ravel() - p
            step = _line_search(objective, p, d, 1.0)
            lam *= 1.0 - step
            lam[toward] += step
        else:
            limit = lam[away] / (1.0 - lam[away])
            d = p - matrix[:, away].toarray().ravel()
            step = _line_search(objective, p, d, limit)
            lam *= 1.0 + step
            lam[away] -= step
            if step >= limit:
                lam[away] = 0.0    # pas d'abandon

        p = p + step * d
        iteration += 1
        if iteration % KL_CONFIG["refresh_every"] == 0:
            lam = np.clip(lam, 0.0, None)
            lam /= lam.sum()
            p = np.asarray(matrix @ lam).ravel()

    converged = gap <= gap_tolerance
    if not converged:
        logger.warning("Frank-Wolfe arrêté après %d itérations, écart %.2e", iteration, gap)

    lam = np.clip(lam, 0.0, None)
    lam /= lam.sum()
    minimizer = strategies.combine(lam)
    value = objective.value(minimizer.values)
    unscaled = float(rel_entr(behavior.values, minimizer.values).sum() * LOG2_E)
    logger.debug("min KL = %.10g bits (%d itérations, écart %.2e)", value, iteration, gap)

    return KLResult(
        value=value,
        unscaled=unscaled,
        minimizer=minimizer,
        strategy_weights=lam,
        gap=float(gap),
        iterations=iteration,
        converged=converged
    )

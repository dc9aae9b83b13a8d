"""
Constructeurs et tests de validité des comportements
"""

from itertools import product
from typing import Optional, Sequence

import numpy as np

from config.settings import get_tolerance
from data.models import Behavior, BehaviorReport, Scenario, StrategyMatrix
from scenario.indexing import flat_index, nonsignaling_matrix
from scenario.strategies import enumerate_strategies
from utils.errors import DomainError

CHSH_SCENARIO = Scenario.symmetric(parties=2, inputs=2, outputs=2)


def validate_behavior(behavior: Behavior, tol: Optional[float] = None) -> BehaviorReport:
    """Vérifier positivité et normalisation de chaque distribution conditionnelle"""
    if tol is None:
        tol = get_tolerance("feasibility_tolerance")

    report = BehaviorReport()
    negativity = max(0.0, -float(behavior.values.min()))
    normalization = float(np.abs(behavior.table().sum(axis=1) - 1.0).max())
    report.max_violation = max(negativity, normalization)

    if negativity > tol:
        report.add_error(
            "values", f"Probabilité négative ({-negativity:.3e})", "negative", -negativity
        )
    if normalization > tol:
        report.add_error(
            "values", f"Normalisation violée de {normalization:.3e}", "normalization", normalization
        )
    return report


def is_nonsignaling(behavior: Behavior, tol: Optional[float] = None) -> bool:
    """Vérifier les contraintes de non-signalisation partie par partie"""
    if tol is None:
        tol = get_tolerance("nonsignaling_tolerance")

    residual = nonsignaling_matrix(behavior.scenario) @ behavior.values
    return residual.size == 0 or float(np.abs(residual).max()) <= tol


def uniform_behavior(scenario: Scenario) -> Behavior:
    """Comportement maximalement mélangé u(a|x) = 1/Π d_k"""
    return Behavior(scenario=scenario, values=np.full(scenario.dimension, 1.0 / scenario.output_count))


def deterministic_behavior(scenario: Scenario, responses: Sequence[Sequence[int]]) -> Behavior:
    """Comportement déterministe a_k = f_k(x_k)"""
    if len(responses) != scenario.parties:
        raise DomainError(f"{scenario.parties} fonctions de réponse attendues")

    values = np.zeros(scenario.dimension)
    for x in product(*(range(m) for m in scenario.inputs)):
        a = tuple(responses[k][x_k] for k, x_k in enumerate(x))
        values[flat_index(scenario, x, a)] = 1.0
    return Behavior(scenario=scenario, values=values)


def mix_with_uniform(behavior: Behavior, visibility: float) -> Behavior:
    """Mélange v·q + (1 - v)·u avec le bruit blanc"""
    if not 0.0 <= visibility <= 1.0:
        raise DomainError(f"La visibilité doit être dans [0, 1], reçu {visibility}")

    noise = 1.0 / behavior.scenario.output_count
    values = visibility * behavior.values + (1.0 - visibility) * noise
    return Behavior(scenario=behavior.scenario, values=values)


def pr_variant(alpha: int, beta: int, gamma: int) -> Behavior:
    """Boîte PR a ⊕ b = xy ⊕ αx ⊕ βy ⊕ γ"""
    values = np.zeros(CHSH_SCENARIO.dimension)
    for x, y, a, b in product(range(2), repeat=4):
        if a ^ b == (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma:
            values[flat_index(CHSH_SCENARIO, (x, y), (a, b))] = 0.5
    return Behavior(scenario=CHSH_SCENARIO, values=values)


def make_pr_box() -> Behavior:
    """Boîte de Popescu-Rohrlich p(a,b|x,y) = 1/2 si a ⊕ b = xy"""
    return pr_variant(0, 0, 0)


def chsh_nonsignaling_vertices() -> np.ndarray:
    """Les 24 sommets du polytope non signalant du scénario CHSH (en lignes)"""
    local = enumerate_strategies(CHSH_SCENARIO).matrix.toarray().T
    boxes = [pr_variant(*bits).values for bits in product(range(2), repeat=3)]
    return np.vstack([local, np.array(boxes)])


def sample_chsh_nonsignaling(rng: np.random.Generator, concentration: float = 0.3) -> Behavior:
    """Comportement non signalant aléatoire : mélange de Dirichlet des 24 sommets"""
    vertices = chsh_nonsignaling_vertices()
    weights = rng.dirichlet(np.full(vertices.shape[0], concentration))
    return Behavior(scenario=CHSH_SCENARIO, values=weights @ vertices)


def sample_local_behavior(
    strategies: StrategyMatrix,
    rng: np.random.Generator,
    support: int = 5
) -> Behavior:
    """Mélange aléatoire de quelques stratégies déterministes"""
    support = min(support, strategies.column_count)
    columns = rng.choice(strategies.column_count, size=support, replace=False)
    weights = np.zeros(strategies.column_count)
    weights[columns] = rng.dirichlet(np.ones(support))
    return strategies.combine(weights)

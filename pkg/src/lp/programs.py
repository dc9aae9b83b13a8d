"""
Assemblage des programmes linéaires du calcul de non-localité
"""

import numpy as np
import scipy.sparse as sp

from data.models import Behavior, BellFunctional, InputDistribution, StrategyMatrix
from lp.engine import LinearProgram
from scenario.indexing import nonsignaling_matrix, normalization_matrix
from utils.errors import ScenarioMismatchError


def _check_same_scenario(*items) -> None:
    scenarios = [item.scenario for item in items]
    if any(s != scenarios[0] for s in scenarios[1:]):
        raise ScenarioMismatchError(
            "Scénarios incompatibles : " + ", ".join(s.describe() for s in scenarios)
        )


def distance_weights(distribution: InputDistribution) -> np.ndarray:
    """Poids w_j = π(x(j))/2 de la distance de trace"""
    return distribution.entry_weights() / 2.0


def assemble_nl_program(
    behavior: Behavior,
    strategies: StrategyMatrix,
    distribution: InputDistribution
) -> LinearProgram:
    """
    Distance de trace minimale entre q et le polytope local

    Variables (t, λ) : min Σ w_j t_j  s.c.  -t ≤ q - A·λ ≤ t, Σλ = 1, λ ≥ 0.
    Les multiplicateurs des deux blocs d'inégalités donnent le certificat dual.
    """
    _check_same_scenario(behavior, strategies, distribution)
    n, m = strategies.matrix.shape
    identity = sp.identity(n, format="csr")
    matrix = strategies.matrix

    ub_matrix = sp.vstack([
        sp.hstack([-identity, -matrix]),
        sp.hstack([-identity, matrix])
    ], format="csr")
    ub_rhs = np.concatenate([-behavior.values, behavior.values])

    eq_matrix = sp.hstack([sp.csr_matrix((1, n)), np.ones((1, m))], format="csr")

    return LinearProgram(
        objective=np.concatenate([distance_weights(distribution), np.zeros(m)]),
        eq_matrix=eq_matrix,
        eq_rhs=[1.0],
        ub_matrix=ub_matrix,
        ub_rhs=ub_rhs,
        lower=np.concatenate([np.full(n, -np.inf), np.zeros(m)]),
        label="nl"
    )


def assemble_constrained_nl_program(
    functional: BellFunctional,
    target: float,
    strategies: StrategyMatrix,
    distribution: InputDistribution
) -> LinearProgram:
    """
    Distance minimale au polytope local parmi les q non signalants tels que f·q = c

    Variables (t, λ, q) ; le statut est infeasible si c est hors de portée.
    """
    _check_same_scenario(functional, strategies, distribution)
    scenario = functional.scenario
    n, m = strategies.matrix.shape
    identity = sp.identity(n, format="csr")
    matrix = strategies.matrix

    ub_matrix = sp.vstack([
        sp.hstack([-identity, -matrix, identity]),
        sp.hstack([-identity, matrix, -identity])
    ], format="csr")

    normalization = normalization_matrix(scenario)
    nonsignaling = nonsignaling_matrix(scenario)
    eq_matrix = sp.vstack([
        sp.hstack([sp.csr_matrix((1, n)), np.ones((1, m)), sp.csr_matrix((1, n))]),
        sp.hstack([sp.csr_matrix((1, n + m)), functional.coefficients.reshape(1, -1)]),
        sp.hstack([sp.csr_matrix((normalization.shape[0], n + m)), normalization]),
        sp.hstack([sp.csr_matrix((nonsignaling.shape[0], n + m)), nonsignaling])
    ], format="csr")
    eq_rhs = np.concatenate([
        [1.0, target],
        np.ones(normalization.shape[0]),
        np.zeros(nonsignaling.shape[0])
    ])

    return LinearProgram(
        objective=np.concatenate([distance_weights(distribution), np.zeros(m + n)]),
        eq_matrix=eq_matrix,
        eq_rhs=eq_rhs,
        ub_matrix=ub_matrix,
        ub_rhs=np.zeros(2 * n),
        lower=np.concatenate([np.full(n, -np.inf), np.zeros(m + n)]),
        label=f"nl|{functional.label}={target:g}"
    )


def assemble_locality_program(behavior: Behavior, strategies: StrategyMatrix) -> LinearProgram:
    """Écart maximal s minimal : -s ≤ q - A·λ ≤ s, Σλ = 1, λ ≥ 0"""
    _check_same_scenario(behavior, strategies)
    n, m = strategies.matrix.shape
    column = np.ones((n, 1))
    matrix = strategies.matrix

    ub_matrix = sp.vstack([
        sp.hstack([-column, -matrix]),
        sp.hstack([-column, matrix])
    ], format="csr")

    return LinearProgram(
        objective=np.concatenate([[1.0], np.zeros(m)]),
        eq_matrix=sp.hstack([sp.csr_matrix((1, 1)), np.ones((1, m))], format="csr"),
        eq_rhs=[1.0],
        ub_matrix=ub_matrix,
        ub_rhs=np.concatenate([-behavior.values, behavior.values]),
        lower=np.zeros(m + 1),
        label="locality"
    )


def assemble_ns_program(functional: BellFunctional) -> LinearProgram:
    """Maximum de f·q sur les comportements non signalants (objectif -f)"""
    scenario = functional.scenario
    normalization = normalization_matrix(scenario)
    nonsignaling = nonsignaling_matrix(scenario)

    return LinearProgram(
        objective=-functional.coefficients,
        eq_matrix=sp.vstack([normalization, nonsignaling], format="csr"),
        eq_rhs=np.concatenate([np.ones(normalization.shape[0]), np.zeros(nonsignaling.shape[0])]),
        lower=np.zeros(scenario.dimension),
        label=f"ns|{functional.label}"
    )


def assemble_content_program(behavior: Behavior, strategies: StrategyMatrix) -> LinearProgram:
    """Poids local maximal : max Σλ s.c. A·λ ≤ q, λ ≥ 0 (objectif -Σλ)"""
    _check_same_scenario(behavior, strategies)
    m = strategies.column_count
    return LinearProgram(
        objective=-np.ones(m),
        ub_matrix=strategies.matrix,
        ub_rhs=behavior.values,
        lower=np.zeros(m),
        label="content"
    )

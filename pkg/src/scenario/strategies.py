"""
Énumération des stratégies locales déterministes
"""

import logging
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from config.settings import LIMITS
from data.models import Scenario, StrategyMatrix
from scenario.indexing import input_tuples
from utils.errors import CapacityError

logger = logging.getLogger(__name__)


def response_functions(inputs: int, outputs: int) -> np.ndarray:
    """
    Fonctions de réponse f : [m] -> [d] d'une partie

    Returns:
        Tableau (d^m, m), ligne i = encodage lexicographique de la i-ème
        fonction (f(0) le chiffre le plus significatif)
    """
    return np.indices((outputs,) * inputs).reshape(inputs, -1).T


def enumerate_strategies(scenario: Scenario) -> StrategyMatrix:
    """Construire la matrice A des stratégies déterministes locales"""
    column_count = scenario.strategy_count
    if column_count > LIMITS["max_strategies"]:
        raise CapacityError(
            f"{column_count} stratégies, au-delà de la limite {LIMITS['max_strategies']}"
        )
    return _enumerate_cached(scenario)


@lru_cache(maxsize=32)
def _enumerate_cached(scenario: Scenario) -> StrategyMatrix:
    column_count = scenario.strategy_count
    xs = input_tuples(scenario)

    # Indice de la stratégie de chaque partie pour chaque colonne
    per_party = np.indices(
        tuple(d ** m for m, d in zip(scenario.inputs, scenario.outputs))
    ).reshape(scenario.parties, -1)

    output_index = np.zeros((column_count, scenario.input_count), dtype=np.int64)
    for k in range(scenario.parties):
        responses = response_functions(scenario.inputs[k], scenario.outputs[k])
        answers = responses[per_party[k][:, None], xs[None, :, k]]
        output_index = output_index * scenario.outputs[k] + answers

    rows = np.arange(scenario.input_count)[None, :] * scenario.output_count + output_index
    cols = np.repeat(np.arange(column_count), scenario.input_count)

    matrix = sp.csc_matrix(
        (np.ones(rows.size), (rows.ravel(), cols)),
        shape=(scenario.dimension, column_count)
    )
    logger.debug("Matrice de stratégies %s : %d colonnes", scenario.describe(), column_count)
    return StrategyMatrix(scenario=scenario, matrix=matrix)

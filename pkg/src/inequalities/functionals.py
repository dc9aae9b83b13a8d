"""
Fonctionnelles de Bell : évaluation, bornes locale et non signalante, CHSH
"""

import logging
from functools import lru_cache
from itertools import permutations, product
from typing import Dict, List, Optional, Tuple

import numpy as np

from data.models import Behavior, BellFunctional, Scenario, StrategyMatrix
from lp.engine import solve
from lp.programs import assemble_ns_program
from operations.channels import Relabeling
from operations.free import relabeling_index
from scenario.indexing import flat_index
from scenario.strategies import enumerate_strategies
from utils.errors import ScenarioMismatchError, SolverError

logger = logging.getLogger(__name__)

CHSH_SCENARIO = Scenario.symmetric(parties=2, inputs=2, outputs=2)


def evaluate(functional: BellFunctional, behavior: Behavior) -> float:
    """Produit scalaire f·q"""
    if functional.scenario != behavior.scenario:
        raise ScenarioMismatchError(
            f"Fonctionnelle sur {functional.scenario.describe()}, "
            f"comportement sur {behavior.scenario.describe()}"
        )
    return float(np.dot(functional.coefficients, behavior.values))


def local_bound(functional: BellFunctional, strategies: Optional[StrategyMatrix] = None) -> float:
    """Maximum exact de f sur les stratégies déterministes"""
    if strategies is None:
        strategies = enumerate_strategies(functional.scenario)
    elif strategies.scenario != functional.scenario:
        raise ScenarioMismatchError("Matrice de stratégies et fonctionnelle incompatibles")
    return float((strategies.matrix.T @ functional.coefficients).max())


def ns_maximizer(functional: BellFunctional) -> Tuple[float, Behavior]:
    """Maximum de f sur le polytope non signalant et un comportement qui l'atteint"""
    solution = solve(assemble_ns_program(functional))
    if not solution.is_optimal:
        raise SolverError(f"Borne non signalante introuvable pour {functional.label}",
                          solution.status.value)
    values = np.clip(solution.primal, 0.0, None)
    table = values.reshape(functional.scenario.input_count, -1)
    table = table / table.sum(axis=1, keepdims=True)
    return -float(solution.objective), Behavior(scenario=functional.scenario, values=table.ravel())


def ns_bound(functional: BellFunctional) -> float:
    """Maximum de f sur les comportements non signalants"""
    return ns_maximizer(functional)[0]


def make_functional(
    scenario: Scenario,
    coefficients: np.ndarray,
    label: str,
    correlators: Optional[np.ndarray] = None
) -> BellFunctional:
    """Construire une fonctionnelle en recalculant sa borne locale par énumération"""
    draft = BellFunctional(
        scenario=scenario, coefficients=coefficients, local_bound=0.0,
        label=label, correlators=correlators
    )
    return draft.model_copy(update={"local_bound": local_bound(draft)})


def collins_gisin(
    inputs: Tuple[int, int],
    joint: Dict[Tuple[int, int], float],
    alice: Dict[int, float],
    bob: Dict[int, float],
    label: str
) -> BellFunctional:
    """
    Fonctionnelle bipartite binaire en notation de Collins-Gisin

    joint[(x, y)] multiplie p(0,0|x,y) ; alice[x] multiplie p_A(0|x), écrit
    Σ_b p(0,b|x,0) ; bob[y] multiplie p_B(0|y), écrit Σ_a p(a,0|0,y).
    """
    scenario = Scenario(parties=2, inputs=inputs, outputs=(2, 2))
    coefficients = np.zeros(scenario.dimension)
    for (x, y), value in joint.items():
        coefficients[flat_index(scenario, (x, y), (0, 0))] += value
    for x, value in alice.items():
        for b in range(2):
            coefficients[flat_index(scenario, (x, 0), (0, b))] += value
    for y, value in bob.items():
        for a in range(2):
            coefficients[flat_index(scenario, (0, y), (a, 0))] += value
    return make_functional(scenario, coefficients, label)


def make_chsh() -> BellFunctional:
    """CHSH : p(00|00) + p(00|01) + p(00|10) - p(00|11) - p_A(0|0) - p_B(0|0) ≤ 0"""
    return collins_gisin(
        inputs=(2, 2),
        joint={(0, 0): 1.0, (0, 1): 1.0, (1, 0): 1.0, (1, 1): -1.0},
        alice={0: -1.0},
        bob={0: -1.0},
        label="chsh"
    )


def relabel_functional(functional: BellFunctional, relabeling: Relabeling) -> BellFunctional:
    """Fonctionnelle f' telle que f'(R q) = f(q)"""
    destination, target = relabeling_index(functional.scenario, relabeling)
    coefficients = np.empty(target.dimension)
    coefficients[destination] = functional.coefficients
    return BellFunctional(
        scenario=target,
        coefficients=coefficients,
        local_bound=functional.local_bound,
        label=f"{functional.label}'"
    )


def all_relabelings(scenario: Scenario) -> List[Relabeling]:
    """Tous les réétiquetages d'un scénario à parties identiques"""
    per_party = []
    for m, d in zip(scenario.inputs, scenario.outputs):
        input_perms = list(permutations(range(m)))
        output_perms = list(product(list(permutations(range(d))), repeat=m))
        per_party.append(list(product(input_perms, output_perms)))

    relabelings = []
    for party_perm in permutations(range(scenario.parties)):
        for choice in product(*per_party):
            relabelings.append(Relabeling(
                input_perms=tuple(c[0] for c in choice),
                output_perms=tuple(c[1] for c in choice),
                party_perm=party_perm
            ))
    return relabelings


def chsh_symmetry_orbit(functional: BellFunctional) -> List[BellFunctional]:
    """Orbite de f sous les réétiquetages, dédupliquée par ses valeurs sur les stratégies"""
    if functional.scenario != CHSH_SCENARIO:
        raise ScenarioMismatchError("L'orbite CHSH est définie sur le scénario (2,2,2,2)")

    strategies = enumerate_strategies(CHSH_SCENARIO)
    orbit, seen = [], set()
    for relabeling in all_relabelings(CHSH_SCENARIO):
        image = relabel_functional(functional, relabeling)
        signature = tuple(np.round(strategies.matrix.T @ image.coefficients, 9))
        if signature in seen:
            continue
        seen.add(signature)
        orbit.append(image.model_copy(update={"label": f"chsh[{len(orbit)}]"}))

    logger.debug("Orbite de %s : %d éléments", functional.label, len(orbit))
    return orbit


@lru_cache(maxsize=1)
def chsh_orbit() -> Tuple[BellFunctional, ...]:
    """Les 8 images de CHSH, calculées une fois"""
    return tuple(chsh_symmetry_orbit(make_chsh()))

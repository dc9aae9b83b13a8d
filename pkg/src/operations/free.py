"""
Opérations libres sur les comportements
"""

from typing import Sequence, Tuple

import numpy as np

from data.models import Behavior, Scenario
from operations.channels import InputChannel, LocalChannel, Relabeling
from scenario.indexing import entry_tuples
from utils.errors import DomainError, ScenarioMismatchError

_INPUT_LETTERS = "abcdefgh"
_OUTPUT_LETTERS = "ijklmnop"


def relabeling_index(scenario: Scenario, relabeling: Relabeling) -> Tuple[np.ndarray, Scenario]:
    """
    Permutation des entrées du vecteur plat

    Returns:
        (destination, scénario image) avec nouveau[destination[j]] = ancien[j]
    """
    if not relabeling.matches(scenario):
        raise DomainError("Réétiquetage incompatible avec le scénario")

    xs, as_ = entry_tuples(scenario)
    new_x = np.empty_like(xs)
    new_a = np.empty_like(as_)
    for k in range(scenario.parties):
        sigma = np.asarray(relabeling.input_perms[k])
        tau = np.asarray(relabeling.output_perms[k])
        new_x[:, k] = sigma[xs[:, k]]
        new_a[:, k] = tau[xs[:, k], as_[:, k]]

    order = list(relabeling.party_perm)
    target = relabeling.target_scenario(scenario)
    x_index = np.ravel_multi_index(new_x[:, order].T, target.inputs)
    a_index = np.ravel_multi_index(new_a[:, order].T, target.outputs)
    return x_index * target.output_count + a_index, target


def relabel(behavior: Behavior, relabeling: Relabeling) -> Behavior:
    """Appliquer un réétiquetage des entrées, des sorties et des parties"""
    destination, target = relabeling_index(behavior.scenario, relabeling)
    values = np.empty(target.dimension)
    values[destination] = behavior.values
    return Behavior(scenario=target, values=values)


def convex_mix(items: Sequence[Tuple[float, Behavior]]) -> Behavior:
    """Mélange convexe Σ π_k q_k"""
    if not items:
        raise DomainError("Le mélange doit contenir au moins un comportement")

    weights = np.array([weight for weight, _ in items], dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
        raise DomainError(f"Les poids du mélange doivent former une distribution : {weights}")

    scenario = items[0][1].scenario
    if any(behavior.scenario != scenario for _, behavior in items):
        raise ScenarioMismatchError("Tous les comportements doivent partager le même scénario")

    values = sum(weight * behavior.values for weight, behavior in items)
    return Behavior(scenario=scenario, values=values)


def _apply_kernel(tensor: np.ndarray, party: int, kernel: np.ndarray, parties: int) -> np.ndarray:
    """Contracter la sortie d'une partie avec un noyau (m, d, d')"""
    inputs = _INPUT_LETTERS[:parties]
    outputs = _OUTPUT_LETTERS[:parties]
    result = outputs[:party] + "z" + outputs[party + 1:]
    subscripts = f"{inputs}{outputs},{inputs[party]}{outputs[party]}z->{inputs}{result}"
    return np.einsum(subscripts, tensor, kernel)


def post_process(behavior: Behavior, channel: LocalChannel) -> Behavior:
    """O(q)(α|x) = Σ_a O(α|a,x) q(a|x)"""
    scenario = behavior.scenario
    if not channel.matches(scenario):
        raise DomainError("Arité du canal incompatible avec le scénario")

    target = Scenario(parties=scenario.parties, inputs=scenario.inputs, outputs=channel.target_outputs())
    tensor = behavior.tensor()
    result = np.zeros(target.inputs + target.outputs)
    for weight, component in zip(channel.weights, channel.kernels):
        term = tensor
        for k, kernel in enumerate(component):
            term = _apply_kernel(term, k, kernel, scenario.parties)
        result += weight * term
    return Behavior(scenario=target, values=result.ravel())


def pre_process(behavior: Behavior, channel: InputChannel) -> Behavior:
    """I(q)(a|χ) = Σ_x q(a|x) I(x|χ), sous la contrainte Σ_χ I(x|χ) ≤ 1"""
    scenario = behavior.scenario
    if not channel.matches(scenario):
        raise DomainError("Arité du canal d'entrée incompatible avec le scénario")

    column_sums = channel.column_sums(scenario)
    if column_sums.max() > 1.0 + 1e-9:
        raise DomainError(
            f"Pré-traitement non admissible : Σ_χ I(x|χ) atteint {column_sums.max():.6g} > 1"
        )

    table = behavior.table()
    chis = np.indices(scenario.inputs).reshape(scenario.parties, -1)
    result = np.zeros_like(table)
    for weight, component in zip(channel.weights, channel.maps):
        old = np.stack([np.asarray(f)[chis[k]] for k, f in enumerate(component)])
        result += weight * table[np.ravel_multi_index(old, scenario.inputs)]
    return Behavior(scenario=scenario, values=result.ravel())


def input_enlarge(behavior: Behavior, party: int, fixed_output: int) -> Behavior:
    """
    Ajouter à une partie une entrée supplémentaire non corrélée

    Sur la nouvelle entrée (dernier indice) la partie répond fixed_output ;
    les autres suivent leur marginale prise à l'entrée 0 de cette partie.
    """
    scenario = behavior.scenario
    if not 0 <= party < scenario.parties:
        raise IndexError(f"Partie {party} hors de [0, {scenario.parties})")
    if not 0 <= fixed_output < scenario.outputs[party]:
        raise IndexError(f"Sortie {fixed_output} hors de [0, {scenario.outputs[party]})")

    n_parties = scenario.parties
    tensor = behavior.tensor()
    marginal = np.take(tensor, 0, axis=party).sum(axis=n_parties - 1 + party)

    one_hot = np.zeros(scenario.outputs[party])
    one_hot[fixed_output] = 1.0
    block = np.moveaxis(marginal[..., None] * one_hot, -1, n_parties - 1 + party)
    block = np.expand_dims(block, axis=party)

    inputs = list(scenario.inputs)
    inputs[party] += 1
    target = Scenario(parties=n_parties, inputs=tuple(inputs), outputs=scenario.outputs)
    return Behavior(scenario=target, values=np.concatenate([tensor, block], axis=party).ravel())

"""
Convention d'indexation des comportements et contraintes linéaires associées

Un comportement est un vecteur plat indexé par (x, a) : tuple d'entrées
majeur, tuple de sorties mineur, la partie 1 étant la plus significative
dans chaque groupe.
"""

from typing import Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from data.models import Scenario


def _check_tuple(values: Sequence[int], bounds: Tuple[int, ...], name: str) -> Tuple[int, ...]:
    """Vérifier qu'un tuple d'indices est dans les bornes du scénario"""
    if len(values) != len(bounds):
        raise IndexError(f"Le tuple {name} doit avoir {len(bounds)} composantes, reçu {len(values)}")
    for k, (value, bound) in enumerate(zip(values, bounds)):
        if not 0 <= value < bound:
            raise IndexError(f"{name}[{k}] = {value} hors de [0, {bound})")
    return tuple(int(v) for v in values)


def flat_index(scenario: Scenario, inputs: Sequence[int], outputs: Sequence[int]) -> int:
    """Indice plat de l'entrée (x, a)"""
    x = _check_tuple(inputs, scenario.inputs, "x")
    a = _check_tuple(outputs, scenario.outputs, "a")
    x_index = int(np.ravel_multi_index(x, scenario.inputs))
    a_index = int(np.ravel_multi_index(a, scenario.outputs))
    return x_index * scenario.output_count + a_index


def decode_index(scenario: Scenario, index: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Inverse de flat_index"""
    if not 0 <= index < scenario.dimension:
        raise IndexError(f"Indice {index} hors de [0, {scenario.dimension})")
    x_index, a_index = divmod(int(index), scenario.output_count)
    x = tuple(int(v) for v in np.unravel_index(x_index, scenario.inputs))
    a = tuple(int(v) for v in np.unravel_index(a_index, scenario.outputs))
    return x, a


def input_tuples(scenario: Scenario) -> np.ndarray:
    """Tableau (nombre d'entrées, N) des tuples d'entrées dans l'ordre plat"""
    return np.indices(scenario.inputs).reshape(scenario.parties, -1).T


def output_tuples(scenario: Scenario) -> np.ndarray:
    """Tableau (nombre de sorties, N) des tuples de sorties dans l'ordre plat"""
    return np.indices(scenario.outputs).reshape(scenario.parties, -1).T


def entry_tuples(scenario: Scenario) -> Tuple[np.ndarray, np.ndarray]:
    """Tuples (x, a) de chaque entrée du vecteur plat"""
    xs = input_tuples(scenario)
    as_ = output_tuples(scenario)
    return (
        np.repeat(xs, scenario.output_count, axis=0),
        np.tile(as_, (scenario.input_count, 1))
    )


def normalization_matrix(scenario: Scenario) -> sp.csr_matrix:
    """Matrice S telle que (S·q)_x = Σ_a q(a|x)"""
    return sp.kron(
        sp.identity(scenario.input_count, format="csr"),
        np.ones((1, scenario.output_count)),
        format="csr"
    )


def nonsignaling_matrix(scenario: Scenario) -> sp.csr_matrix:
    """
    Matrice N telle que N·q = 0 ssi q est non signalant

    Pour chaque partie k et chaque entrée x_k > 0, la marginale obtenue en
    sommant sur a_k doit coïncider avec celle prise en x_k = 0.
    """
    n_parties = scenario.parties
    index = np.arange(scenario.dimension).reshape(scenario.inputs + scenario.outputs)

    rows, cols, data = [], [], []
    offset = 0
    for k in range(n_parties):
        d_k = scenario.outputs[k]
        reference = np.take(index, 0, axis=k)
        reference = np.moveaxis(reference, n_parties - 1 + k, -1).reshape(-1, d_k)
        for x_k in range(1, scenario.inputs[k]):
            current = np.take(index, x_k, axis=k)
            current = np.moveaxis(current, n_parties - 1 + k, -1).reshape(-1, d_k)
            row_ids = offset + np.repeat(np.arange(current.shape[0]), d_k)

            rows.extend([row_ids, row_ids])
            cols.extend([current.ravel(), reference.ravel()])
            data.extend([np.ones(current.size), -np.ones(reference.size)])
            offset += current.shape[0]

    if offset == 0:
        return sp.csr_matrix((0, scenario.dimension))

    return sp.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(offset, scenario.dimension)
    )

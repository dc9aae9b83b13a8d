"""
Représentation des opérations libres : réétiquetages, canaux locaux de sortie
et canaux locaux d'entrée
"""

from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from data.models import Scenario

_WEIGHT_TOLERANCE = 1e-9


def _is_permutation(values: List[int]) -> bool:
    return sorted(values) == list(range(len(values)))


class Relabeling(BaseModel):
    """
    Réétiquetage des entrées, des sorties et des parties

    La partie k envoie x_k sur input_perms[k][x_k] et, pour l'entrée x_k,
    a_k sur output_perms[k][x_k][a_k]. La nouvelle partie i est ensuite
    l'ancienne partie party_perm[i].
    """
    model_config = ConfigDict(frozen=True)

    input_perms: Tuple[Tuple[int, ...], ...]
    output_perms: Tuple[Tuple[Tuple[int, ...], ...], ...]
    party_perm: Tuple[int, ...]

    @model_validator(mode='after')
    def validate_permutations(self):
        parties = len(self.party_perm)
        if len(self.input_perms) != parties or len(self.output_perms) != parties:
            raise ValueError('Une permutation par partie est attendue')
        if not _is_permutation(list(self.party_perm)):
            raise ValueError(f'Permutation des parties invalide : {self.party_perm}')
        for k in range(parties):
            if not _is_permutation(list(self.input_perms[k])):
                raise ValueError(f'Permutation des entrées invalide pour la partie {k}')
            if len(self.output_perms[k]) != len(self.input_perms[k]):
                raise ValueError(f'Une permutation de sorties par entrée attendue (partie {k})')
            for perm in self.output_perms[k]:
                if not _is_permutation(list(perm)):
                    raise ValueError(f'Permutation des sorties invalide pour la partie {k}')
        return self

    @classmethod
    def identity(cls, scenario: Scenario) -> "Relabeling":
        """Réétiquetage identité"""
        return cls(
            input_perms=tuple(tuple(range(m)) for m in scenario.inputs),
            output_perms=tuple(
                tuple(tuple(range(d)) for _ in range(m))
                for m, d in zip(scenario.inputs, scenario.outputs)
            ),
            party_perm=tuple(range(scenario.parties))
        )

    def matches(self, scenario: Scenario) -> bool:
        """Vérifier la compatibilité avec un scénario"""
        if len(self.party_perm) != scenario.parties:
            return False
        for k in range(scenario.parties):
            if len(self.input_perms[k]) != scenario.inputs[k]:
                return False
            if any(len(perm) != scenario.outputs[k] for perm in self.output_perms[k]):
                return False
        return True

    def target_scenario(self, scenario: Scenario) -> Scenario:
        """Scénario image (parties réordonnées)"""
        return Scenario(
            parties=scenario.parties,
            inputs=tuple(scenario.inputs[k] for k in self.party_perm),
            outputs=tuple(scenario.outputs[k] for k in self.party_perm)
        )

    def inverse(self) -> "Relabeling":
        """Réétiquetage inverse, défini sur le scénario image"""
        input_perms, output_perms = [], []
        for old in self.party_perm:
            sigma = np.asarray(self.input_perms[old])
            sigma_inv = np.argsort(sigma)
            input_perms.append(tuple(int(v) for v in sigma_inv))
            output_perms.append(tuple(
                tuple(int(v) for v in np.argsort(self.output_perms[old][sigma_inv[new_x]]))
                for new_x in range(sigma.size)
            ))
        return Relabeling(
            input_perms=tuple(input_perms),
            output_perms=tuple(output_perms),
            party_perm=tuple(int(v) for v in np.argsort(self.party_perm))
        )


class LocalChannel(BaseModel):
    """
    Post-traitement local des sorties avec aléa partagé

    kernels[c][k] est un tableau (m_k, d_k, d'_k) : distribution de la
    nouvelle sortie sachant (x_k, a_k), pour la composante c de poids weights[c].
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    weights: np.ndarray
    kernels: List[List[np.ndarray]] = Field(default_factory=list)

    @field_validator('weights', mode='before')
    @classmethod
    def as_array(cls, v):
        return np.array(v, dtype=float).ravel()

    @field_validator('kernels', mode='before')
    @classmethod
    def as_arrays(cls, v):
        return [[np.array(kernel, dtype=float) for kernel in component] for component in v]

    @model_validator(mode='after')
    def validate_kernels(self):
        if len(self.kernels) != self.weights.size:
            raise ValueError('Un jeu de noyaux par poids est attendu')
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1.0) > _WEIGHT_TOLERANCE:
            raise ValueError('Les poids du mélange doivent former une distribution')
        shapes = [tuple(kernel.shape) for kernel in self.kernels[0]]
        for component in self.kernels:
            if [tuple(kernel.shape) for kernel in component] != shapes:
                raise ValueError('Toutes les composantes doivent avoir la même arité')
            for kernel in component:
                if kernel.ndim != 3 or np.any(kernel < -_WEIGHT_TOLERANCE):
                    raise ValueError('Noyau invalide : tableau (m, d, d\') positif attendu')
                if np.abs(kernel.sum(axis=2) - 1.0).max() > _WEIGHT_TOLERANCE:
                    raise ValueError('Chaque distribution conditionnelle doit sommer à 1')
        return self

    def target_outputs(self) -> Tuple[int, ...]:
        return tuple(kernel.shape[2] for kernel in self.kernels[0])

    def matches(self, scenario: Scenario) -> bool:
        """Vérifier l'arité du canal"""
        shapes = [kernel.shape[:2] for kernel in self.kernels[0]]
        return shapes == list(zip(scenario.inputs, scenario.outputs))


class InputChannel(BaseModel):
    """
    Pré-traitement local des entrées avec aléa partagé

    maps[c][k][χ_k] est l'ancienne entrée x_k lue par la partie k pour la
    nouvelle entrée χ_k, dans la composante c de poids weights[c].
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    weights: np.ndarray
    maps: List[List[Tuple[int, ...]]]

    @field_validator('weights', mode='before')
    @classmethod
    def as_array(cls, v):
        return np.array(v, dtype=float).ravel()

    @model_validator(mode='after')
    def validate_maps(self):
        if len(self.maps) != self.weights.size:
            raise ValueError('Une famille de fonctions par poids est attendue')
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1.0) > _WEIGHT_TOLERANCE:
            raise ValueError('Les poids du mélange doivent former une distribution')
        arity = [len(f) for f in self.maps[0]]
        for component in self.maps:
            if [len(f) for f in component] != arity:
                raise ValueError('Toutes les composantes doivent avoir la même arité')
        return self

    def matches(self, scenario: Scenario) -> bool:
        """Même nombre d'entrées par partie, images dans les bornes"""
        if len(self.maps[0]) != scenario.parties:
            return False
        for component in self.maps:
            for k, f in enumerate(component):
                if len(f) != scenario.inputs[k] or any(not 0 <= v < scenario.inputs[k] for v in f):
                    return False
        return True

    def column_sums(self, scenario: Scenario) -> np.ndarray:
        """Σ_χ I(x|χ) pour chaque tuple d'entrées x (ordre plat)"""
        total = np.zeros(scenario.inputs)
        for weight, component in zip(self.weights, self.maps):
            counts = [np.bincount(np.asarray(f), minlength=m) for f, m in zip(component, scenario.inputs)]
            term = counts[0].astype(float)
            for count in counts[1:]:
                term = np.multiply.outer(term, count)
            total = total + weight * term
        return total.ravel()


def random_relabeling(scenario: Scenario, rng: np.random.Generator) -> Relabeling:
    """Réétiquetage aléatoire (parties comprises)"""
    return Relabeling(
        input_perms=tuple(tuple(int(v) for v in rng.permutation(m)) for m in scenario.inputs),
        output_perms=tuple(
            tuple(tuple(int(v) for v in rng.permutation(d)) for _ in range(m))
            for m, d in zip(scenario.inputs, scenario.outputs)
        ),
        party_perm=tuple(int(v) for v in rng.permutation(scenario.parties))
    )


def random_local_channel(
    scenario: Scenario,
    rng: np.random.Generator,
    components: int = 5,
    outputs: Optional[Tuple[int, ...]] = None
) -> LocalChannel:
    """Mélange de Dirichlet de post-traitements déterministes"""
    outputs = scenario.outputs if outputs is None else outputs
    kernels = []
    for _ in range(components):
        component = []
        for m, d, d_new in zip(scenario.inputs, scenario.outputs, outputs):
            choice = rng.integers(d_new, size=(m, d))
            component.append(np.eye(d_new)[choice])
        kernels.append(component)
    return LocalChannel(weights=rng.dirichlet(np.ones(components)), kernels=kernels)


def random_input_channel(
    scenario: Scenario,
    rng: np.random.Generator,
    components: int = 5
) -> InputChannel:
    """
    Pré-traitement aléatoire respectant Σ_χ I(x|χ) ≤ 1

    Chaque bloc est soit une permutation des entrées, soit une fonction
    quelconque moyennée sur tous ses décalages cycliques ; chaque bloc a des
    sommes de colonnes égales à 1, le mélange de Dirichlet aussi.
    """
    block_weights = rng.dirichlet(np.ones(components))
    weights, maps = [], []
    for block_weight in block_weights:
        if rng.random() < 0.5:
            weights.append(block_weight)
            maps.append([tuple(int(v) for v in rng.permutation(m)) for m in scenario.inputs])
            continue

        bases = [rng.integers(m, size=m) for m in scenario.inputs]
        shifts = np.indices(scenario.inputs).reshape(scenario.parties, -1).T
        for shift in shifts:
            weights.append(block_weight / shifts.shape[0])
            maps.append([
                tuple(int(v) for v in (base + s) % m)
                for base, s, m in zip(bases, shift, scenario.inputs)
            ])
    weights = np.asarray(weights)
    return InputChannel(weights=weights / weights.sum(), maps=maps)

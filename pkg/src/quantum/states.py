"""
États purs, mesures projectives et règle de Born
"""

from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from config.settings import get_tolerance
from data.models import Behavior, Scenario
from utils.errors import DomainError


class StateVector(BaseModel):
    """État pur multipartite de norme 1"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dims: Tuple[int, ...]
    amplitudes: np.ndarray

    @field_validator('amplitudes', mode='before')
    @classmethod
    def as_array(cls, v):
        array = np.array(v, dtype=complex).ravel()
        array.setflags(write=False)
        return array

    @model_validator(mode='after')
    def validate_norm(self):
        if self.amplitudes.size != int(np.prod(self.dims)):
            raise ValueError(f'{int(np.prod(self.dims))} amplitudes attendues, reçu {self.amplitudes.size}')
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > get_tolerance("state_norm_tolerance"):
            raise ValueError(f'L\'état doit être normé, norme {norm}')
        return self

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    @classmethod
    def normalized(cls, dims: Sequence[int], amplitudes: Sequence[complex]) -> "StateVector":
        """Construire un état en normalisant les amplitudes"""
        array = np.asarray(amplitudes, dtype=complex)
        return cls(dims=tuple(dims), amplitudes=array / np.linalg.norm(array))


class MeasurementFamily(BaseModel):
    """projectors[k][x][a] : projecteur de la sortie a pour l'entrée x de la partie k"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    projectors: List[List[List[np.ndarray]]]

    @field_validator('projectors', mode='before')
    @classmethod
    def as_arrays(cls, v):
        return [[[np.array(p, dtype=complex) for p in setting] for setting in party] for party in v]

    @model_validator(mode='after')
    def validate_projectors(self):
        tol = get_tolerance("quantum_tolerance")
        for k, party in enumerate(self.projectors):
            if not party:
                raise ValueError(f'La partie {k} doit avoir au moins une mesure')
            dim = party[0][0].shape[0]
            outputs = len(party[0])
            for x, setting in enumerate(party):
                if len(setting) != outputs:
                    raise ValueError(f'Partie {k} : même nombre de sorties attendu pour chaque entrée')
                total = np.zeros((dim, dim), dtype=complex)
                for projector in setting:
                    if projector.shape != (dim, dim):
                        raise ValueError(f'Partie {k}, entrée {x} : projecteur de forme {projector.shape}')
                    if np.abs(projector - projector.conj().T).max() > tol:
                        raise ValueError(f'Partie {k}, entrée {x} : projecteur non hermitien')
                    if np.abs(projector @ projector - projector).max() > tol:
                        raise ValueError(f'Partie {k}, entrée {x} : projecteur non idempotent')
                    total += projector
                if np.abs(total - np.eye(dim)).max() > tol:
                    raise ValueError(f'Partie {k}, entrée {x} : mesure incomplète')
        return self

    @property
    def local_dims(self) -> Tuple[int, ...]:
        return tuple(party[0][0].shape[0] for party in self.projectors)

    @property
    def scenario(self) -> Scenario:
        return Scenario(
            parties=len(self.projectors),
            inputs=tuple(len(party) for party in self.projectors),
            outputs=tuple(len(party[0]) for party in self.projectors)
        )


def projective_basis(vectors: Sequence[Sequence[complex]]) -> List[np.ndarray]:
    """Projecteurs |v⟩⟨v| d'une base orthonormée"""
    return [np.outer(v, np.conj(v)) for v in np.asarray(vectors, dtype=complex)]


def observable_projectors(observable: np.ndarray) -> List[np.ndarray]:
    """Projecteurs (1 ± A)/2 d'une observable de valeurs propres ±1 (sortie 0 ↔ +1)"""
    identity = np.eye(observable.shape[0])
    return [(identity + observable) / 2.0, (identity - observable) / 2.0]


def born_behavior(state: StateVector, measurements: MeasurementFamily) -> Behavior:
    """p(a|x) = ⟨ψ| ⊗_k M^{x_k}_{a_k} |ψ⟩"""
    if measurements.local_dims != state.dims:
        raise DomainError(
            f"Mesures de dimensions {measurements.local_dims}, état de dimensions {state.dims}"
        )

    parties = len(state.dims)
    tensor = state.amplitudes.reshape(state.dims)
    for k, party in enumerate(measurements.projectors):
        stacked = np.array([[p for p in setting] for setting in party])   # (m, d, D, D)
        tensor = np.tensordot(stacked, tensor, axes=([3], [2 * k + k]))
        tensor = np.moveaxis(tensor, [0, 1, 2], [2 * k, 2 * k + 1, 2 * (k + 1) + k])

    probabilities = (np.abs(tensor) ** 2).sum(axis=tuple(range(2 * parties, 3 * parties)))
    order = list(range(0, 2 * parties, 2)) + list(range(1, 2 * parties, 2))
    values = np.transpose(probabilities, order).ravel()
    return Behavior(scenario=measurements.scenario, values=values)

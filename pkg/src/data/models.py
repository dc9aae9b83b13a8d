"""
Modèles de données pour les scénarios de Bell et les mesures de non-localité
Utilisation de Pydantic pour la validation des données
"""

from enum import Enum
from math import prod
from typing import List, Optional, Any, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import LIMITS, get_tolerance
from utils.errors import CapacityError


def _frozen_array(values: Any, dtype=float) -> np.ndarray:
    """Copier en tableau numpy à une dimension, en lecture seule"""
    array = np.array(values, dtype=dtype).ravel()
    array.setflags(write=False)
    return array


class SolveStatus(str, Enum):
    """Statut d'un programme linéaire"""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class Scenario(BaseModel):
    """Scénario de Bell : parties, entrées et sorties par partie"""
    model_config = ConfigDict(frozen=True)

    parties: int = Field(..., ge=1)
    inputs: Tuple[int, ...]
    outputs: Tuple[int, ...]

    @field_validator('inputs', 'outputs')
    @classmethod
    def validate_counts(cls, v):
        if any(count < 1 for count in v):
            raise ValueError('Chaque partie doit avoir au moins une entrée et une sortie')
        return tuple(int(count) for count in v)

    @model_validator(mode='after')
    def validate_shape(self):
        if len(self.inputs) != self.parties or len(self.outputs) != self.parties:
            raise ValueError(
                f'{self.parties} parties attendues, reçu {len(self.inputs)} entrées '
                f'et {len(self.outputs)} sorties'
            )
        if self.dimension > LIMITS["max_dimension"]:
            raise CapacityError(
                f'Dimension {self.dimension} supérieure à la limite {LIMITS["max_dimension"]}'
            )
        return self

    @classmethod
    def symmetric(cls, parties: int, inputs: int, outputs: int) -> "Scenario":
        """Scénario où toutes les parties ont les mêmes cardinalités"""
        return cls(parties=parties, inputs=(inputs,) * parties, outputs=(outputs,) * parties)

    @property
    def input_count(self) -> int:
        return prod(self.inputs)

    @property
    def output_count(self) -> int:
        return prod(self.outputs)

    @property
    def dimension(self) -> int:
        return self.input_count * self.output_count

    @property
    def strategy_count(self) -> int:
        return prod(d ** m for m, d in zip(self.inputs, self.outputs))

    def describe(self) -> str:
        """Représentation textuelle utilisée par les formats de fichiers"""
        inputs = " ".join(str(m) for m in self.inputs)
        outputs = " ".join(str(d) for d in self.outputs)
        return f"scenario {self.parties}; {inputs}; {outputs}"


class Behavior(BaseModel):
    """Distribution conditionnelle p(a|x), vecteur plat (entrées majeures)"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    scenario: Scenario
    values: np.ndarray

    @field_validator('values', mode='before')
    @classmethod
    def as_array(cls, v):
        return _frozen_array(v)

    @model_validator(mode='after')
    def validate_length(self):
        if self.values.size != self.scenario.dimension:
            raise ValueError(
                f'Le comportement doit avoir {self.scenario.dimension} entrées, '
                f'reçu {self.values.size}'
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError('Le comportement contient des valeurs non finies')
        return self

    def table(self) -> np.ndarray:
        """Tableau (entrées, sorties)"""
        return self.values.reshape(self.scenario.input_count, self.scenario.output_count)

    def tensor(self) -> np.ndarray:
        """Tenseur d'axes (m_1..m_N, d_1..d_N)"""
        return self.values.reshape(self.scenario.inputs + self.scenario.outputs)

    def joint(self, distribution: "InputDistribution") -> np.ndarray:
        """Distribution jointe π(x)·p(a|x)"""
        return self.values * distribution.entry_weights()


class InputDistribution(BaseModel):
    """Distribution π(x) sur les tuples d'entrées"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    scenario: Scenario
    weights: np.ndarray

    @field_validator('weights', mode='before')
    @classmethod
    def as_array(cls, v):
        return _frozen_array(v)

    @model_validator(mode='after')
    def validate_weights(self):
        if self.weights.size != self.scenario.input_count:
            raise ValueError(
                f'{self.scenario.input_count} poids attendus, reçu {self.weights.size}'
            )
        if np.any(self.weights < 0):
            raise ValueError('Les poids des entrées doivent être positifs')
        if abs(self.weights.sum() - 1.0) > get_tolerance("distribution_tolerance"):
            raise ValueError(f'Les poids des entrées somment à {self.weights.sum()}, pas à 1')
        return self

    @classmethod
    def uniform(cls, scenario: Scenario) -> "InputDistribution":
        """Distribution uniforme sur les entrées"""
        count = scenario.input_count
        return cls(scenario=scenario, weights=np.full(count, 1.0 / count))

    @classmethod
    def restricted(cls, scenario: Scenario, tuples: Sequence[Sequence[int]]) -> "InputDistribution":
        """Distribution uniforme sur une liste de tuples d'entrées"""
        weights = np.zeros(scenario.input_count)
        for x in tuples:
            weights[np.ravel_multi_index(tuple(x), scenario.inputs)] = 1.0
        if not weights.any():
            raise ValueError('Aucun tuple d\'entrées retenu')
        return cls(scenario=scenario, weights=weights / weights.sum())

    @classmethod
    def on_support(cls, functional: "BellFunctional") -> "InputDistribution":
        """Distribution uniforme sur les entrées où la fonctionnelle intervient"""
        scenario = functional.scenario
        table = np.abs(functional.coefficients).reshape(scenario.input_count, scenario.output_count)
        support = table.max(axis=1) > 0
        return cls(scenario=scenario, weights=support / support.sum())

    def entry_weights(self) -> np.ndarray:
        """Poids π(x(j)) répété sur chaque entrée j du vecteur plat"""
        return np.repeat(self.weights, self.scenario.output_count)


class StrategyMatrix(BaseModel):
    """Matrice creuse A dont les colonnes sont les stratégies déterministes locales"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    scenario: Scenario
    matrix: sp.csc_matrix

    @model_validator(mode='after')
    def validate_shape(self):
        expected = (self.scenario.dimension, self.scenario.strategy_count)
        if self.matrix.shape != expected:
            raise ValueError(f'Forme {self.matrix.shape} inattendue, {expected} attendue')
        return self

    @property
    def column_count(self) -> int:
        return self.matrix.shape[1]

    def column(self, index: int) -> Behavior:
        """Stratégie déterministe d'indice donné"""
        values = self.matrix[:, index].toarray().ravel()
        return Behavior(scenario=self.scenario, values=values)

    def combine(self, weights: np.ndarray) -> Behavior:
        """Comportement local A·λ"""
        return Behavior(scenario=self.scenario, values=self.matrix @ np.asarray(weights, dtype=float))


class ValidationIssue(BaseModel):
    """Écart détecté lors de la validation d'un comportement"""
    field: str
    message: str
    code: str
    value: Any = None


class BehaviorReport(BaseModel):
    """Résultat de validation d'un comportement"""
    is_valid: bool = True
    max_violation: float = 0.0
    errors: List[ValidationIssue] = Field(default_factory=list)

    def add_error(self, field: str, message: str, code: str, value: Any = None):
        """Ajouter une erreur de validation"""
        self.errors.append(ValidationIssue(field=field, message=message, code=code, value=value))
        self.is_valid = False


class BellFunctional(BaseModel):
    """Fonctionnelle de Bell linéaire sur l'espace des comportements"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    scenario: Scenario
    coefficients: np.ndarray
    local_bound: float
    label: str = ""
    # Table des corrélateurs c(x), seulement pour les fonctionnelles de Mermin
    correlators: Optional[np.ndarray] = None

    @field_validator('coefficients', mode='before')
    @classmethod
    def as_array(cls, v):
        return _frozen_array(v)

    @field_validator('correlators', mode='before')
    @classmethod
    def as_optional_array(cls, v):
        return None if v is None else _frozen_array(v)

    @model_validator(mode='after')
    def validate_length(self):
        if self.coefficients.size != self.scenario.dimension:
            raise ValueError(
                f'La fonctionnelle doit avoir {self.scenario.dimension} coefficients, '
                f'reçu {self.coefficients.size}'
            )
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError('La fonctionnelle contient des coefficients non finis')
        return self


class Certificate(BaseModel):
    """Certificat dual v, ‖v‖∞ ≤ 1, minorant la distance au polytope local"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    scenario: Scenario
    v: np.ndarray
    weights: np.ndarray        # w_j = π(x(j))/2
    value: float
    strategy_max: float        # max_i Σ_j w_j v_j A_ji

    @field_validator('v', 'weights', mode='before')
    @classmethod
    def as_array(cls, v):
        return _frozen_array(v)

    def lower_bound(self, behavior: Behavior) -> float:
        """Minorant affine de NL évalué sur un autre comportement"""
        return float(np.dot(self.weights * self.v, behavior.values) - self.strategy_max)


class NLResult(BaseModel):
    """Résultat du calcul de NL"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    value: float
    closest_local: Behavior
    strategy_weights: np.ndarray
    iterations: int = 0


class ConstrainedNLResult(BaseModel):
    """Résultat de NL minimisé à valeur de fonctionnelle fixée"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    status: SolveStatus
    target: float
    value: Optional[float] = None
    behavior: Optional[Behavior] = None
    closest_local: Optional[Behavior] = None

    @property
    def is_feasible(self) -> bool:
        return self.status == SolveStatus.OPTIMAL


class KLResult(BaseModel):
    """Résultat de la minimisation de l'entropie relative"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    value: float               # Σ_x π(x) KL(q(·|x) ‖ p(·|x)), en bits
    unscaled: float            # Σ_x KL(q(·|x) ‖ p(·|x)), sans préfacteur
    minimizer: Behavior
    strategy_weights: np.ndarray
    gap: float
    iterations: int
    converged: bool

"""
Familles d'inégalités de Bell : CGLMP(d), I_nn22, Mermin M_N
"""

from itertools import product
from typing import Tuple

import numpy as np
import pandas as pd

from config.settings import LIMITS
from data.models import Behavior, BellFunctional, Scenario
from inequalities.functionals import collins_gisin, make_functional
from scenario.indexing import flat_index
from utils.errors import DomainError


def _check_range(name: str, value: int, bounds: Tuple[int, int]) -> None:
    if not bounds[0] <= value <= bounds[1]:
        raise DomainError(f"{name} doit être entre {bounds[0]} et {bounds[1]}, reçu {value}")


def make_cglmp(d: int) -> BellFunctional:
    """
    Inégalité CGLMP normalisée (borne locale 0, maximum non signalant 1/2)

    La constante -1/2 est répartie en -1/8 sur chaque probabilité, la
    normalisation de chacune des 4 entrées valant 1.
    """
    _check_range("d", d, LIMITS["cglmp_outputs"])
    scenario = Scenario.symmetric(parties=2, inputs=2, outputs=d)
    coefficients = np.full(scenario.dimension, -1.0 / 8.0)

    # (x, y) -> (décalage positif, décalage négatif) de la relation b - a = s mod d
    for k in range(d // 2):
        weight = (1.0 - 2.0 * k / (d - 1)) / 4.0
        shifts = {
            (0, 0): (-k, k + 1),         # a = b + k,     a = b - k - 1
            (0, 1): (k, -k - 1),         # b = a + k,     b = a - k - 1
            (1, 0): (k + 1, -k),         # b = a + k + 1, b = a - k
            (1, 1): (-k, k + 1)
        }
        for (x, y), (plus, minus) in shifts.items():
            for a, b in product(range(d), repeat=2):
                index = flat_index(scenario, (x, y), (a, b))
                if (b - a - plus) % d == 0:
                    coefficients[index] += weight
                if (b - a - minus) % d == 0:
                    coefficients[index] -= weight

    return make_functional(scenario, coefficients, f"cglmp{d}")


def make_inn22(n: int) -> BellFunctional:
    """I_nn22 en notation de Collins-Gisin (n = 2 : CHSH, n = 3 : I_3322)"""
    _check_range("n", n, LIMITS["inn22_settings"])
    joint = {}
    for x, y in product(range(n), repeat=2):
        if x + y <= n - 1:
            joint[(x, y)] = 1.0
        elif x + y == n:
            joint[(x, y)] = -1.0

    return collins_gisin(
        inputs=(n, n),
        joint=joint,
        alice={x: -float(n - 1 - x) for x in range(n)},
        bob={0: -1.0},
        label=f"inn22_{n}"
    )


def mermin_correlators(parties: int) -> np.ndarray:
    """
    Table c(x) des corrélateurs de M_N, tableau (2,)*N

    M_1 = A_1 et M_i = M_{i-1}(A_i + Ā_i)/2 + M̄_{i-1}(A_i - Ā_i)/2, où M̄
    échange A et Ā, c'est-à-dire retourne tous les indices.
    """
    table = np.array([1.0, 0.0])
    for _ in range(1, parties):
        flipped = np.flip(table)
        table = np.stack([(table + flipped) / 2.0, (table - flipped) / 2.0], axis=-1)
    return table


def _parity_signs(parties: int) -> np.ndarray:
    """(-1)^(a_1 ⊕ ... ⊕ a_N) dans l'ordre plat des sorties"""
    outputs = np.indices((2,) * parties).reshape(parties, -1).sum(axis=0)
    return np.where(outputs % 2 == 0, 1.0, -1.0)


def make_mermin(parties: int) -> Tuple[np.ndarray, BellFunctional]:
    """Inégalité de Mermin ⟨M_N⟩ ≤ 1 : table des corrélateurs et fonctionnelle"""
    _check_range("N", parties, LIMITS["mermin_parties"])
    correlators = mermin_correlators(parties)
    scenario = Scenario.symmetric(parties=parties, inputs=2, outputs=2)
    coefficients = np.kron(correlators.ravel(), _parity_signs(parties))
    functional = make_functional(scenario, coefficients, f"mermin{parties}", correlators=correlators)
    return correlators, functional


def mermin_max_ns_behavior(parties: int) -> Behavior:
    """Comportement q_max atteignant le maximum non signalant de M_N"""
    correlators, functional = make_mermin(parties)
    signs = _parity_signs(parties)
    rows = []
    for c in correlators.ravel():
        if abs(c) < 1e-12:
            rows.append(np.full(signs.size, 1.0 / signs.size))
        else:
            rows.append(np.where(signs == np.sign(c), 2.0 / signs.size, 0.0))
    return Behavior(scenario=functional.scenario, values=np.concatenate(rows))


def count_negative_settings(parties: int) -> int:
    """Nombre α_N de réglages de coefficient négatif dans M_N (N pair)"""
    _check_range("N", parties, LIMITS["mermin_parties"])
    if parties % 2:
        raise DomainError(f"α_N n'est défini que pour N pair, reçu {parties}")
    return int(np.count_nonzero(mermin_correlators(parties) < -1e-12))


def mermin_recursion_table(max_parties: int = 8) -> pd.DataFrame:
    """Comptage direct de α_N face aux deux récurrences candidates"""
    rows = []
    printed = variant = 1
    for parties in range(2, max_parties + 1, 2):
        if parties > 2:
            printed = 2 * printed + 2 ** (parties - 4)
            variant = 2 * variant + 2 ** (parties - 2)
        direct = count_negative_settings(parties)
        rows.append({
            "N": parties,
            "direct": direct,
            "recursion_2a_plus_2^(N-2)": printed,
            "recursion_2a_plus_2^N": variant,
            "matches_variant": direct == variant
        })
    return pd.DataFrame(rows)

"""
Familles d'états et de mesures : qutrits γ pour CGLMP, GHZ pour Mermin
"""

from typing import Tuple

import numpy as np

from config.settings import LIMITS
from quantum.states import MeasurementFamily, StateVector, observable_projectors, projective_basis
from utils.errors import DomainError

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)

# Décalages de phase des bases de Fourier de CGLMP
CGLMP_ALICE_PHASES = (0.0, 0.5)
CGLMP_BOB_PHASES = (0.25, -0.25)


def _fourier_basis(d: int, phase: float, sign: int) -> np.ndarray:
    """Lignes |k⟩ = d^{-1/2} Σ_j ω^{sign·j(k + sign·phase)}|j⟩"""
    j = np.arange(d)
    k = np.arange(d)[:, None]
    return np.exp(2j * np.pi * sign * j * (k + sign * phase) / d) / np.sqrt(d)


def cglmp_measurements(d: int) -> MeasurementFamily:
    """Bases de mesure standard de CGLMP (entrée 0 : A_1 / B_1)"""
    alice = [projective_basis(_fourier_basis(d, alpha, 1)) for alpha in CGLMP_ALICE_PHASES]
    bob = [projective_basis(_fourier_basis(d, beta, -1)) for beta in CGLMP_BOB_PHASES]
    return MeasurementFamily(projectors=[alice, bob])


def cglmp_setup(gamma: float, d: int = 3) -> Tuple[StateVector, MeasurementFamily]:
    """
    État γ|00⟩ + √(1-2γ²)|11⟩ + γ|22⟩ et mesures de CGLMP

    γ = 1/√3 donne l'état maximalement intriqué, γ ≈ 0.617 la violation
    maximale de CGLMP.

    Raises:
        DomainError: d ≠ 3 ou 2γ² > 1
    """
    if d != 3:
        raise DomainError(f"La famille γ est définie pour deux qutrits, reçu d = {d}")
    if gamma < 0 or 2 * gamma ** 2 > 1 + 1e-12:
        raise DomainError(f"γ doit être dans [0, 1/√2], reçu {gamma}")

    middle = np.sqrt(max(0.0, 1.0 - 2 * gamma ** 2))
    amplitudes = np.zeros(d * d, dtype=complex)
    for j, c in enumerate((gamma, middle, gamma)):
        amplitudes[j * d + j] = c
    return StateVector.normalized((d, d), amplitudes), cglmp_measurements(d)


def xy_observable(angle: float) -> np.ndarray:
    """cos φ X + sin φ Y"""
    return np.cos(angle) * PAULI_X + np.sin(angle) * PAULI_Y


def mermin_angles(parties: int) -> Tuple[float, float]:
    """Angles (A, Ā) dans le plan XY atteignant ⟨M_N⟩ = 2^{(N-1)/2}"""
    base = -np.pi * (parties - 1) / (4 * parties)
    return base, base + np.pi / 2


def ghz_state(parties: int) -> StateVector:
    """(|0…0⟩ + |1…1⟩)/√2"""
    amplitudes = np.zeros(2 ** parties, dtype=complex)
    amplitudes[0] = amplitudes[-1] = 1.0
    return StateVector.normalized((2,) * parties, amplitudes)


def ghz_mermin_setup(parties: int) -> Tuple[StateVector, MeasurementFamily]:
    """État GHZ_N et, pour chaque partie, les observables A (entrée 0) et Ā (entrée 1)"""
    low, high = LIMITS["mermin_parties"]
    if not low <= parties <= high:
        raise DomainError(f"N doit être entre {low} et {high}, reçu {parties}")

    settings = [observable_projectors(xy_observable(angle)) for angle in mermin_angles(parties)]
    return ghz_state(parties), MeasurementFamily(projectors=[settings] * parties)


def chsh_tsirelson_setup() -> Tuple[StateVector, MeasurementFamily]:
    """Paire maximalement intriquée et angles atteignant la borne de Tsirelson"""
    return ghz_mermin_setup(2)

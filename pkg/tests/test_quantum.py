"""
Tests de la règle de Born et des familles quantiques
"""

import numpy as np
import pytest
from pydantic import ValidationError

from config.settings import REFERENCE_VALUES
from inequalities.families import make_cglmp, make_mermin
from inequalities.functionals import evaluate, make_chsh
from quantum.setups import (
    cglmp_setup, chsh_tsirelson_setup, ghz_mermin_setup, ghz_state, mermin_angles
)
from quantum.states import (
    MeasurementFamily, StateVector, born_behavior, observable_projectors, projective_basis
)
from scenario.behaviors import is_nonsignaling, validate_behavior
from scenario.indexing import flat_index
from utils.errors import DomainError

Z_BASIS = projective_basis(np.eye(2))


class TestStates:

    def test_norm_checked(self):
        with pytest.raises(ValidationError):
            StateVector(dims=(2,), amplitudes=[1.0, 1.0])

    def test_normalized(self):
        state = StateVector.normalized((2,), [1.0, 1.0])
        assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0)
        assert state.dimension == 2

    def test_amplitude_count_checked(self):
        with pytest.raises(ValidationError):
            StateVector(dims=(2, 2), amplitudes=[1.0, 0.0])

    def test_projectors_checked(self):
        not_projector = [np.array([[1.0, 0.5], [0.5, 0.0]]), np.array([[0.0, -0.5], [-0.5, 1.0]])]
        with pytest.raises(ValidationError):
            MeasurementFamily(projectors=[[not_projector]])

    def test_incomplete_measurement(self):
        with pytest.raises(ValidationError):
            MeasurementFamily(projectors=[[[Z_BASIS[0]]]])

    def test_observable_projectors(self):
        plus, minus = observable_projectors(np.diag([1.0, -1.0]))
        np.testing.assert_allclose(plus, np.diag([1.0, 0.0]))
        np.testing.assert_allclose(minus, np.diag([0.0, 1.0]))


class TestBornRule:

    def test_product_state_party_order(self):
        # |0⟩ ⊗ |1⟩ mesuré en base Z : a = 0, b = 1 avec certitude
        state = StateVector(dims=(2, 2), amplitudes=[0.0, 1.0, 0.0, 0.0])
        measurements = MeasurementFamily(projectors=[[Z_BASIS, Z_BASIS], [Z_BASIS]])
        behavior = born_behavior(state, measurements)
        scenario = measurements.scenario
        assert scenario.inputs == (2, 1)
        for x in range(2):
            assert behavior.values[flat_index(scenario, (x, 0), (0, 1))] == pytest.approx(1.0)
        assert behavior.values.sum() == pytest.approx(2.0)

    def test_global_phase_invariance(self):
        state, measurements = cglmp_setup(0.5)
        shifted = StateVector(dims=state.dims, amplitudes=np.exp(0.7j) * state.amplitudes)
        np.testing.assert_allclose(
            born_behavior(shifted, measurements).values,
            born_behavior(state, measurements).values,
            atol=1e-12
        )

    def test_dimension_mismatch(self):
        _, measurements = chsh_tsirelson_setup()
        with pytest.raises(DomainError):
            born_behavior(ghz_state(3), measurements)

    def test_tsirelson(self):
        behavior = born_behavior(*chsh_tsirelson_setup())
        assert validate_behavior(behavior, 1e-10).is_valid
        assert is_nonsignaling(behavior, 1e-10)
        assert evaluate(make_chsh(), behavior) == pytest.approx((np.sqrt(2) - 1) / 2, abs=1e-9)

    @pytest.mark.parametrize("parties", [2, 3, 4])
    def test_ghz_mermin_value(self, parties):
        behavior = born_behavior(*ghz_mermin_setup(parties))
        _, functional = make_mermin(parties)
        assert is_nonsignaling(behavior, 1e-10)
        assert evaluate(functional, behavior) == pytest.approx(2 ** ((parties - 1) / 2), abs=1e-9)

    def test_mermin_angles(self):
        low, high = mermin_angles(3)
        assert low == pytest.approx(-np.pi / 6)
        assert high - low == pytest.approx(np.pi / 2)

    def test_ghz_range(self):
        with pytest.raises(DomainError):
            ghz_mermin_setup(1)


class TestCGLMPFamily:

    def test_maximal_violation(self):
        behavior = born_behavior(*cglmp_setup(REFERENCE_VALUES["gamma_maximizer"]))
        value = evaluate(make_cglmp(3), behavior)
        assert value == pytest.approx(REFERENCE_VALUES["cglmp3_quantum_value"], abs=1e-3)

    def test_maximally_entangled(self):
        state, measurements = cglmp_setup(REFERENCE_VALUES["maximally_entangled_gamma"])
        np.testing.assert_allclose(np.abs(state.amplitudes[[0, 4, 8]]), 3 ** -0.5)
        behavior = born_behavior(state, measurements)
        assert validate_behavior(behavior, 1e-10).is_valid
        assert evaluate(make_cglmp(3), behavior) == pytest.approx(0.2182, abs=1e-3)

    def test_single_maximum(self):
        cglmp = make_cglmp(3)
        grid = np.linspace(0.0, 2 ** -0.5, 200)
        values = np.array([evaluate(cglmp, born_behavior(*cglmp_setup(gamma))) for gamma in grid])
        best = int(np.argmax(values))
        peaks = [
            i for i in range(1, grid.size - 1)
            if values[i] > values[i - 1] + 1e-12 and values[i] > values[i + 1] + 1e-12
        ]
        assert peaks == [best]
        assert abs(grid[best] - REFERENCE_VALUES["gamma_maximizer"]) <= 0.01

    def test_product_state_is_not_violating(self):
        behavior = born_behavior(*cglmp_setup(0.0))
        assert evaluate(make_cglmp(3), behavior) <= 1e-9

    def test_domain(self):
        with pytest.raises(DomainError):
            cglmp_setup(0.8)
        with pytest.raises(DomainError):
            cglmp_setup(0.5, d=4)

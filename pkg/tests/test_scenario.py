"""
Tests des scénarios, de l'indexation et des stratégies déterministes
"""

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.optimize import linprog

from data.models import Behavior, InputDistribution, Scenario
from inequalities.functionals import chsh_orbit, evaluate
from scenario.behaviors import (
    deterministic_behavior, is_nonsignaling, mix_with_uniform, sample_chsh_nonsignaling,
    uniform_behavior, validate_behavior
)
from scenario.indexing import decode_index, flat_index, input_tuples, nonsignaling_matrix
from scenario.locality import is_local
from scenario.strategies import enumerate_strategies, response_functions
from utils.errors import CapacityError, DomainError


class TestScenario:

    def test_chsh_dimensions(self, chsh_scenario):
        assert chsh_scenario.dimension == 16
        assert chsh_scenario.strategy_count == 16
        assert chsh_scenario.describe() == "scenario 2; 2 2; 2 2"

    def test_asymmetric_counts(self):
        scenario = Scenario(parties=2, inputs=(3, 2), outputs=(2, 3))
        assert scenario.input_count == 6
        assert scenario.output_count == 6
        assert scenario.strategy_count == 2 ** 3 * 3 ** 2

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            Scenario(parties=2, inputs=(2,), outputs=(2, 2))

    def test_zero_outputs_rejected(self):
        with pytest.raises(ValidationError):
            Scenario(parties=1, inputs=(2,), outputs=(0,))

    def test_capacity(self):
        with pytest.raises(CapacityError):
            Scenario.symmetric(parties=8, inputs=4, outputs=4)


class TestIndexing:

    def test_flat_index_order(self, chsh_scenario):
        # entrées majeures, partie 1 la plus significative
        assert flat_index(chsh_scenario, (0, 0), (0, 0)) == 0
        assert flat_index(chsh_scenario, (0, 0), (0, 1)) == 1
        assert flat_index(chsh_scenario, (1, 0), (0, 1)) == 9
        assert flat_index(chsh_scenario, (1, 1), (1, 1)) == 15

    def test_decode_inverts_flat_index(self):
        scenario = Scenario(parties=3, inputs=(2, 3, 2), outputs=(2, 2, 3))
        for j in range(0, scenario.dimension, 7):
            x, a = decode_index(scenario, j)
            assert flat_index(scenario, x, a) == j

    def test_out_of_range(self, chsh_scenario):
        with pytest.raises(IndexError):
            flat_index(chsh_scenario, (2, 0), (0, 0))
        with pytest.raises(IndexError):
            decode_index(chsh_scenario, 16)

    def test_input_tuples(self, chsh_scenario):
        np.testing.assert_array_equal(input_tuples(chsh_scenario), [[0, 0], [0, 1], [1, 0], [1, 1]])

    def test_nonsignaling_matrix_shape(self, chsh_scenario):
        assert nonsignaling_matrix(chsh_scenario).shape == (8, 16)

    def test_single_input_has_no_constraint(self):
        scenario = Scenario(parties=2, inputs=(1, 1), outputs=(2, 2))
        assert nonsignaling_matrix(scenario).shape == (0, 4)


class TestStrategies:

    def test_response_functions(self):
        np.testing.assert_array_equal(response_functions(2, 2), [[0, 0], [0, 1], [1, 0], [1, 1]])

    def test_columns_are_behaviors(self, chsh_strategies):
        dense = chsh_strategies.matrix.toarray()
        assert dense.shape == (16, 16)
        assert set(np.unique(dense)) == {0.0, 1.0}
        np.testing.assert_allclose(dense.sum(axis=0), 4.0)
        # colonnes distinctes
        assert len({tuple(column) for column in dense.T}) == 16

    def test_columns_are_deterministic_behaviors(self):
        scenario = Scenario(parties=2, inputs=(3, 2), outputs=(2, 3))
        strategies = enumerate_strategies(scenario)
        for index in (0, 5, strategies.column_count - 1):
            column = strategies.column(index)
            assert validate_behavior(column).is_valid
            assert set(np.unique(column.values)) == {0.0, 1.0}

    def test_capacity(self):
        with pytest.raises(CapacityError):
            enumerate_strategies(Scenario.symmetric(parties=2, inputs=6, outputs=5))


class TestBehaviors:

    def test_pr_box_valid_and_nonsignaling(self, pr_box):
        assert validate_behavior(pr_box).is_valid
        assert is_nonsignaling(pr_box)

    def test_negative_entry_reported(self, chsh_scenario):
        values = uniform_behavior(chsh_scenario).values.copy()
        values[0] -= 0.5
        values[1] += 0.5
        report = validate_behavior(Behavior(scenario=chsh_scenario, values=values))
        assert not report.is_valid
        assert report.errors[0].code == "negative"
        assert report.max_violation == pytest.approx(0.25)

    def test_normalization_reported(self, chsh_scenario):
        values = np.full(16, 0.3)
        report = validate_behavior(Behavior(scenario=chsh_scenario, values=values))
        assert [error.code for error in report.errors] == ["normalization"]

    def test_tolerance_is_respected(self, chsh_scenario):
        values = uniform_behavior(chsh_scenario).values.copy()
        values[0] += 1e-6
        behavior = Behavior(scenario=chsh_scenario, values=values)
        assert not validate_behavior(behavior).is_valid
        assert validate_behavior(behavior, tol=1e-5).is_valid

    def test_signaling_detected(self, chsh_scenario):
        # Alice répond l'entrée de Bob
        values = np.zeros(16)
        for x in range(2):
            for y in range(2):
                values[flat_index(chsh_scenario, (x, y), (y, 0))] = 1.0
        behavior = Behavior(scenario=chsh_scenario, values=values)
        assert validate_behavior(behavior).is_valid
        assert not is_nonsignaling(behavior)

    def test_wrong_length_rejected(self, chsh_scenario):
        with pytest.raises(ValidationError):
            Behavior(scenario=chsh_scenario, values=np.zeros(15))

    def test_deterministic_behavior(self, chsh_scenario):
        behavior = deterministic_behavior(chsh_scenario, [(0, 1), (1, 1)])
        assert behavior.values[flat_index(chsh_scenario, (1, 0), (1, 1))] == 1.0
        assert behavior.values.sum() == 4.0
        with pytest.raises(DomainError):
            deterministic_behavior(chsh_scenario, [(0, 1)])

    def test_mix_with_uniform(self, pr_box):
        mixed = mix_with_uniform(pr_box, 0.5)
        assert mixed.values.max() == pytest.approx(0.375)
        assert mixed.values.min() == pytest.approx(0.125)
        with pytest.raises(DomainError):
            mix_with_uniform(pr_box, 1.5)

    def test_random_nonsignaling_samples(self, rng):
        for _ in range(10):
            behavior = sample_chsh_nonsignaling(rng)
            assert validate_behavior(behavior).is_valid
            assert is_nonsignaling(behavior)


class TestInputDistribution:

    def test_uniform(self, chsh_scenario):
        distribution = InputDistribution.uniform(chsh_scenario)
        np.testing.assert_allclose(distribution.weights, 0.25)
        assert distribution.entry_weights().size == 16

    def test_restricted(self):
        scenario = Scenario.symmetric(parties=2, inputs=3, outputs=2)
        distribution = InputDistribution.restricted(scenario, [(x, y) for x in range(2) for y in range(2)])
        assert distribution.weights[0] == pytest.approx(0.25)
        assert distribution.weights[2] == 0.0

    def test_not_normalized_rejected(self, chsh_scenario):
        with pytest.raises(ValidationError):
            InputDistribution(scenario=chsh_scenario, weights=[0.5, 0.5, 0.5, 0.5])


class TestLocality:

    def test_pr_box_not_local(self, pr_box, chsh_strategies):
        local, weights = is_local(pr_box, chsh_strategies)
        assert not local
        assert weights is None

    def test_deterministic_is_local(self, chsh_scenario, chsh_strategies):
        behavior = deterministic_behavior(chsh_scenario, [(1, 0), (0, 0)])
        local, weights = is_local(behavior, chsh_strategies)
        assert local
        assert weights.sum() == pytest.approx(1.0)
        np.testing.assert_allclose(chsh_strategies.combine(weights).values, behavior.values, atol=1e-9)

    def test_noisy_pr_box_becomes_local(self, pr_box, chsh_strategies):
        assert is_local(mix_with_uniform(pr_box, 0.5), chsh_strategies)[0]
        assert not is_local(mix_with_uniform(pr_box, 0.6), chsh_strategies)[0]

    def test_agrees_with_dense_membership(self, chsh_strategies, rng):
        dense = chsh_strategies.matrix.toarray()
        columns = dense.shape[1]
        equalities = np.vstack([dense, np.ones((1, columns))])
        verdicts = set()
        for _ in range(100):
            behavior = sample_chsh_nonsignaling(rng)
            # points trop proches d'une facette CHSH ignorés
            margin = max(evaluate(functional, behavior) for functional in chsh_orbit())
            if abs(margin) < 1e-6:
                continue
            result = linprog(
                np.zeros(columns),
                A_eq=equalities,
                b_eq=np.append(behavior.values, 1.0),
                bounds=[(0, None)] * columns,
                method="highs"
            )
            assert result.status in (0, 2, 4)
            expected = result.status == 0
            assert is_local(behavior, chsh_strategies)[0] == expected
            verdicts.add(expected)
        assert verdicts == {True, False}

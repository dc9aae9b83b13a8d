"""
Tests des fonctionnelles de Bell et de leurs bornes
"""

import numpy as np
import pytest

from data.models import Behavior
from inequalities.families import (
    count_negative_settings, make_cglmp, make_inn22, make_mermin, mermin_correlators,
    mermin_max_ns_behavior, mermin_recursion_table
)
from inequalities.functionals import (
    chsh_orbit, evaluate, local_bound, make_chsh, ns_bound, ns_maximizer, relabel_functional
)
from operations.channels import random_relabeling
from operations.free import relabel
from scenario.behaviors import mix_with_uniform, sample_chsh_nonsignaling, uniform_behavior
from utils.errors import DomainError, ScenarioMismatchError


class TestCHSH:

    def test_bounds(self):
        chsh = make_chsh()
        assert chsh.local_bound == pytest.approx(0.0, abs=1e-12)
        assert ns_bound(chsh) == pytest.approx(0.5, abs=1e-9)

    def test_values(self, pr_box, chsh_scenario):
        chsh = make_chsh()
        assert evaluate(chsh, pr_box) == pytest.approx(0.5)
        assert evaluate(chsh, uniform_behavior(chsh_scenario)) == pytest.approx(-0.5)

    def test_same_as_inn22_two_settings(self):
        np.testing.assert_allclose(make_inn22(2).coefficients, make_chsh().coefficients)

    def test_orbit(self, chsh_strategies):
        orbit = chsh_orbit()
        assert len(orbit) == 8
        for functional in orbit:
            assert local_bound(functional, chsh_strategies) == pytest.approx(0.0, abs=1e-12)

    def test_orbit_covers_pr_variants(self, pr_box):
        values = sorted(evaluate(functional, pr_box) for functional in chsh_orbit())
        assert values[-1] == pytest.approx(0.5)

    def test_scenario_mismatch(self):
        with pytest.raises(ScenarioMismatchError):
            evaluate(make_chsh(), uniform_behavior(make_cglmp(3).scenario))

    def test_evaluate_is_linear(self, rng):
        chsh = make_chsh()
        for _ in range(10):
            first, second = sample_chsh_nonsignaling(rng), sample_chsh_nonsignaling(rng)
            weight = float(rng.random())
            mixed = Behavior(
                scenario=first.scenario, values=weight * first.values + (1 - weight) * second.values
            )
            expected = weight * evaluate(chsh, first) + (1 - weight) * evaluate(chsh, second)
            assert abs(evaluate(chsh, mixed) - expected) <= 1e-12


class TestFamilies:

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_cglmp_bounds(self, d):
        functional = make_cglmp(d)
        assert functional.local_bound == pytest.approx(0.0, abs=1e-9)
        assert ns_bound(functional) == pytest.approx(0.5, abs=1e-7)

    def test_cglmp_range(self):
        with pytest.raises(DomainError):
            make_cglmp(1)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_inn22_bounds(self, n):
        functional = make_inn22(n)
        assert functional.local_bound == pytest.approx(0.0, abs=1e-9)
        assert ns_bound(functional) == pytest.approx((n - 1) / 2, abs=1e-7)

    def test_i3322_noise_line(self):
        i3322 = make_inn22(3)
        _, q_max = ns_maximizer(i3322)
        assert evaluate(i3322, uniform_behavior(i3322.scenario)) == pytest.approx(-1.0)
        for visibility in (0.0, 0.25, 0.5, 0.75, 1.0):
            value = evaluate(i3322, mix_with_uniform(q_max, visibility))
            assert value == pytest.approx(2 * visibility - 1, abs=1e-7)

    @pytest.mark.slow
    def test_inn22_five_settings(self):
        functional = make_inn22(5)
        assert functional.local_bound == pytest.approx(0.0, abs=1e-9)
        assert ns_bound(functional) == pytest.approx(2.0, abs=1e-7)

    @pytest.mark.parametrize("parties", [2, 3, 4])
    def test_mermin_bounds(self, parties):
        _, functional = make_mermin(parties)
        assert functional.local_bound == pytest.approx(1.0, abs=1e-9)
        assert ns_bound(functional) == pytest.approx(2 ** np.ceil((parties - 1) / 2), abs=1e-7)

    @pytest.mark.slow
    def test_mermin_bounds_five_parties(self):
        _, functional = make_mermin(5)
        assert functional.local_bound == pytest.approx(1.0, abs=1e-9)
        assert ns_bound(functional) == pytest.approx(4.0, abs=1e-7)

    @pytest.mark.parametrize("parties", [2, 3, 4, 5, 6])
    def test_mermin_correlator_support(self, parties):
        table = mermin_correlators(parties)
        nonzero = np.abs(table[np.abs(table) > 1e-12])
        np.testing.assert_allclose(nonzero, nonzero[0])
        expected = 2 ** parties if parties % 2 == 0 else 2 ** (parties - 1)
        assert nonzero.size == expected

    @pytest.mark.parametrize("parties", [2, 3])
    def test_mermin_max_ns_behavior(self, parties):
        _, functional = make_mermin(parties)
        behavior = mermin_max_ns_behavior(parties)
        assert evaluate(functional, behavior) == pytest.approx(ns_bound(functional), abs=1e-7)

    def test_mermin_correlators(self):
        # M_2 = (AB + AB̄ + ĀB - ĀB̄)/2
        np.testing.assert_allclose(mermin_correlators(2), [[0.5, 0.5], [0.5, -0.5]])

    def test_negative_settings(self):
        assert [count_negative_settings(n) for n in (2, 4, 6, 8)] == [1, 6, 28, 120]
        with pytest.raises(DomainError):
            count_negative_settings(3)

    def test_recursion_table(self):
        table = mermin_recursion_table(8)
        assert list(table["N"]) == [2, 4, 6, 8]
        assert table["matches_variant"].all()
        assert not (table["direct"] == table["recursion_2a_plus_2^(N-2)"]).all()


class TestBounds:

    def test_ns_maximizer_is_pr_box(self, pr_box):
        value, behavior = ns_maximizer(make_chsh())
        assert value == pytest.approx(0.5, abs=1e-9)
        np.testing.assert_allclose(behavior.values, pr_box.values, atol=1e-7)

    def test_relabel_functional(self, rng):
        chsh = make_chsh()
        for _ in range(5):
            relabeling = random_relabeling(chsh.scenario, rng)
            behavior = sample_chsh_nonsignaling(rng)
            image = relabel_functional(chsh, relabeling)
            assert evaluate(image, relabel(behavior, relabeling)) == pytest.approx(evaluate(chsh, behavior))
            assert local_bound(image) == pytest.approx(chsh.local_bound, abs=1e-12)

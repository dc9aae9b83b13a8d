"""
Tests des formats de fichiers texte
"""

import numpy as np
import pytest

from data.models import InputDistribution, Scenario
from data.storage import (
    load_behavior, load_functional, load_input_distribution, save_behavior, save_functional,
    save_input_distribution, write_certificate
)
from inequalities.families import make_cglmp
from inequalities.functionals import make_chsh
from measures.trace import dual_certificate
from utils.errors import ParseError


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestBehaviorFiles:

    def test_round_trip(self, tmp_path, pr_box):
        path = save_behavior(pr_box, tmp_path / "pr.txt", comment="boîte PR")
        loaded = load_behavior(path)
        assert loaded.scenario == pr_box.scenario
        np.testing.assert_array_equal(loaded.values, pr_box.values)

    def test_written_format(self, tmp_path, pr_box):
        lines = save_behavior(pr_box, tmp_path / "pr.txt").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "scenario 2; 2 2; 2 2"
        assert lines[1] == "0 0 0 0 0.5"
        assert len(lines) == 9

    def test_comments_and_defaults(self, tmp_path):
        path = _write(tmp_path / "q.txt", "# déterministe\nscenario 1; 2; 2\n0 0 1.0  # x=0\n\n1 1 1\n")
        behavior = load_behavior(path)
        np.testing.assert_array_equal(behavior.values, [1.0, 0.0, 0.0, 1.0])

    def test_bad_header(self, tmp_path):
        path = _write(tmp_path / "q.txt", "# commentaire\nscenari 1; 2; 2\n")
        with pytest.raises(ParseError) as info:
            load_behavior(path)
        assert info.value.line == 2

    def test_malformed_scenario(self, tmp_path):
        path = _write(tmp_path / "q.txt", "scenario 2; 2; 2 2\n")
        with pytest.raises(ParseError):
            load_behavior(path)

    def test_field_count(self, tmp_path):
        path = _write(tmp_path / "q.txt", "scenario 1; 2; 2\n0 0 0.5\n0 1\n")
        with pytest.raises(ParseError) as info:
            load_behavior(path)
        assert info.value.line == 3

    def test_out_of_range(self, tmp_path):
        path = _write(tmp_path / "q.txt", "scenario 1; 2; 2\n2 0 1.0\n")
        with pytest.raises(ParseError):
            load_behavior(path)

    def test_duplicate(self, tmp_path):
        path = _write(tmp_path / "q.txt", "scenario 1; 2; 2\n0 0 0.5\n0 0 0.5\n")
        with pytest.raises(ParseError):
            load_behavior(path)

    def test_bad_number(self, tmp_path):
        path = _write(tmp_path / "q.txt", "scenario 1; 2; 2\n0 0 abc\n")
        with pytest.raises(ParseError):
            load_behavior(path)
        _write(path, "scenario 1; 2; 2\n0 0 nan\n")
        with pytest.raises(ParseError):
            load_behavior(path)

    def test_missing_and_empty(self, tmp_path):
        with pytest.raises(ParseError):
            load_behavior(tmp_path / "absent.txt")
        with pytest.raises(ParseError):
            load_behavior(_write(tmp_path / "vide.txt", "# rien\n"))

    def test_error_message_has_location(self, tmp_path):
        path = _write(tmp_path / "q.txt", "scenario 1; 2; 2\n0 0 x\n")
        with pytest.raises(ParseError, match=r"q\.txt:2:"):
            load_behavior(path)


class TestFunctionalFiles:

    def test_round_trip(self, tmp_path):
        chsh = make_chsh()
        loaded = load_functional(save_functional(chsh, tmp_path / "chsh.txt"))
        np.testing.assert_allclose(loaded.coefficients, chsh.coefficients)
        assert loaded.local_bound == pytest.approx(0.0, abs=1e-12)
        assert loaded.label == "chsh"

    def test_auto_bound(self, tmp_path):
        cglmp = make_cglmp(3)
        path = save_functional(cglmp, tmp_path / "cglmp.txt")
        text = path.read_text(encoding="utf-8").splitlines()
        text[2] = "local_bound auto"
        _write(path, "\n".join(text) + "\n")
        assert load_functional(path).local_bound == pytest.approx(0.0, abs=1e-9)

    def test_declared_bound_is_recomputed(self, tmp_path):
        path = _write(tmp_path / "f.txt", "scenario 1; 2; 2\nlocal_bound 5\n0 0 1\n1 1 1\n")
        assert load_functional(path).local_bound == pytest.approx(2.0)

    def test_missing_bound(self, tmp_path):
        path = _write(tmp_path / "f.txt", "scenario 1; 2; 2\n0 0 1\n")
        with pytest.raises(ParseError):
            load_functional(path)


class TestInputDistributionFiles:

    def test_round_trip(self, tmp_path):
        scenario = Scenario.symmetric(parties=2, inputs=3, outputs=2)
        distribution = InputDistribution.restricted(scenario, [(0, 0), (1, 2)])
        loaded = load_input_distribution(save_input_distribution(distribution, tmp_path / "pi.txt"))
        np.testing.assert_allclose(loaded.weights, distribution.weights)

    def test_renormalized(self, tmp_path):
        path = _write(tmp_path / "pi.txt", "scenario 1; 2; 2\n0 0.5\n1 0.5000001\n")
        distribution = load_input_distribution(path)
        assert distribution.weights.sum() == pytest.approx(1.0, abs=1e-12)

    def test_not_normalized(self, tmp_path):
        path = _write(tmp_path / "pi.txt", "scenario 1; 2; 2\n0 0.5\n1 0.4\n")
        with pytest.raises(ParseError):
            load_input_distribution(path)

    def test_negative_weight(self, tmp_path):
        path = _write(tmp_path / "pi.txt", "scenario 1; 2; 2\n0 1.5\n1 -0.5\n")
        with pytest.raises(ParseError):
            load_input_distribution(path)

    def test_scenario_mismatch(self, tmp_path, chsh_scenario):
        path = _write(tmp_path / "pi.txt", "scenario 1; 2; 2\n0 1\n")
        with pytest.raises(ParseError):
            load_input_distribution(path, chsh_scenario)


def test_certificate_file(tmp_path, pr_box):
    certificate = dual_certificate(pr_box)
    lines = write_certificate(certificate, tmp_path / "cert.txt").read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# value ")
    assert float(lines[0].split()[-1]) == pytest.approx(0.25, abs=1e-7)
    assert lines[2] == "scenario 2; 2 2; 2 2"

"""
Tests des paramètres de configuration
"""

import pytest

from config.settings import NUMERICS_CONFIG, get_config, get_exit_code, get_tolerance


def test_get_config_sections():
    assert get_config("numerics") is NUMERICS_CONFIG
    assert get_config("logging")["level"]
    assert get_config("inconnue") == {}


def test_get_tolerance():
    assert get_tolerance("feasibility_tolerance") == pytest.approx(1e-9)
    with pytest.raises(KeyError):
        get_tolerance("inconnue")


def test_exit_codes():
    assert [get_exit_code(key) for key in ("ok", "failure", "parse", "solver", "infeasible")] == [0, 1, 2, 3, 4]

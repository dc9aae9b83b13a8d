"""
Configuration commune des tests
"""

import os
import sys

import numpy as np
import pytest

# Ajouter le dossier src au path pour les imports
sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(__file__)), 'src'))

from scenario.behaviors import CHSH_SCENARIO, make_pr_box  # noqa: E402
from scenario.strategies import enumerate_strategies  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: campagnes longues de vérification")


@pytest.fixture
def chsh_scenario():
    return CHSH_SCENARIO


@pytest.fixture
def chsh_strategies():
    return enumerate_strategies(CHSH_SCENARIO)


@pytest.fixture
def pr_box():
    return make_pr_box()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

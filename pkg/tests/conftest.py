"""
Shared fixtures and the --runslow switch
"""
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core import build_legal_set, make_config, make_qam
from src.utils import SolverOptions


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False,
        help="run the Monte-Carlo acceptance checks",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte-Carlo run (needs --runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def reference_link():
    """N=128, n=4, k=2, 16-QAM"""
    return make_config(128, 4, 2, 16), make_qam(16), build_legal_set(4, 2)


@pytest.fixture
def small_link():
    """N=16, n=4, k=2, 16-QAM"""
    return make_config(16, 4, 2, 16), make_qam(16), build_legal_set(4, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def fast_solver():
    return SolverOptions(max_iterations=300)


@pytest.fixture
def draw_bits(rng):
    """Callable returning m uniform random bits"""
    return lambda m: rng.integers(0, 2, size=m, dtype=np.uint8)

import numpy as np
import pytest

from morrey.field import make_grid


def pytest_addoption(parser):
    parser.addoption(
            "--fast", action="store_true", help="skip slow descent pipelines"
            )


def pytest_collection_modifyitems(config, items):
    if not config.getoption("--fast"):
        return
    skip_slow = pytest.mark.skip(reason="--fast given")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def grid2():
    """Small 2D grid, N = 13."""
    return make_grid(2, 2, 3)


@pytest.fixture
def grid1():
    """1D grid, N = 21."""
    return make_grid(1, 2, 5)

import numpy as np
import pytest

from sibre.environments import FrozenLake
from sibre.harness.initialization import HarnessSettings


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow experiments")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def frozen_lake():
    return FrozenLake()


@pytest.fixture
def settings(tmp_path):
    return HarnessSettings(workers=1, output_dir=str(tmp_path / "results"), log_level="INFO")

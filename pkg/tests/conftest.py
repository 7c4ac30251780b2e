from __future__ import annotations

import numpy as np
import pytest

from tcsproofs.systems import build_ord, build_php
from tcsproofs.utils import load_config


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run the stretch instances"
    )


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="stretch instance, needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def config():
    return load_config()


@pytest.fixture
def rng(config):
    return np.random.default_rng(config.acceptance.seed)


@pytest.fixture(scope="session")
def php3():
    return build_php(3)


@pytest.fixture(scope="session")
def ord3():
    return build_ord(3)


@pytest.fixture(scope="session")
def ord4():
    return build_ord(4)

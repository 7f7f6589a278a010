import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nodallab.mesh import icosphere, torus_mesh

settings.register_profile(
    "nodallab", deadline=None, derandomize=True, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("nodallab")

SEED = 0xC0FFEE


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def sphere4():
    return icosphere(4)


@pytest.fixture(scope="session")
def sphere5():
    return icosphere(5)


@pytest.fixture(scope="session")
def torus64():
    return torus_mesh(64)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cglocality.problems import build_1d, build_2d

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def p64():
    """The reference 1D instance: n=64, gamma=2, no forcing."""
    return build_1d(64, 2.0, 0.0)


@pytest.fixture(scope="session")
def p64_g8():
    return build_1d(64, 8.0, 0.0)


@pytest.fixture(scope="session")
def grid_32x8():
    return build_2d(32, 8)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])

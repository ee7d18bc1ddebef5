import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from varlp import _backend
from varlp.measure import GridMeasureSpace

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def unit4():
    """Four midpoint atoms 1/8, 3/8, 5/8, 7/8 of weight 1/4."""
    return GridMeasureSpace.uniform_interval(4)


@pytest.fixture(params=_backend.available())
def kernels(request):
    return _backend.get(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

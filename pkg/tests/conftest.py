import pytest

from core.semigroups import TimeGrid
from core.spaces import ToleranceConfig


@pytest.fixture
def tol():
    return ToleranceConfig(eq_tol=1e-10, argmax_tol=1e-12, spectral_tol=1e-8)


@pytest.fixture
def grid_0_5():
    return TimeGrid.from_range(0.0, 5.0, 0.1)


@pytest.fixture
def grid_0_10():
    return TimeGrid.from_range(0.0, 10.0, 0.1)

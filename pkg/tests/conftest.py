import numpy as np
import pytest

from stardrop.equilibrium import MeasureFamily
from stardrop.model import SubcriticalData


@pytest.fixture(scope="session")
def data3():
    """Reference subcritical model: d=3, t0=1/20, t_top=2."""
    return SubcriticalData.compute(3, 1.0 / 20, 2.0)


@pytest.fixture(scope="session")
def data2():
    return SubcriticalData.compute(2, 1.0 / 20, 1.0)


@pytest.fixture(scope="session")
def fam3(data3):
    return MeasureFamily(data3)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)

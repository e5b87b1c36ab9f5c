import numpy as np
import pytest

from orbiform.harmonic_core import make_grid


@pytest.fixture(scope="session")
def grid2_64():
    return make_grid(2, 64)


@pytest.fixture(scope="session")
def grid2_256():
    return make_grid(2, 256)


@pytest.fixture(scope="session")
def grid2_512():
    return make_grid(2, 512)


@pytest.fixture(scope="session")
def grid3_16():
    return make_grid(3, 16)


@pytest.fixture(scope="session")
def grid3_32():
    return make_grid(3, 32)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

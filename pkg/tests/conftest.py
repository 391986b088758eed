import numpy as np
import pytest

from ell2kit.weights import WeightSequence


@pytest.fixture(scope="session")
def weights():
    return WeightSequence.geometric()


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)

import numpy as np
import pytest

from entroflow.models import (
    CurieWeissModel,
    GaussianOscillatorModel,
    build_pairwise,
    frustrated_theta,
)


@pytest.fixture(scope="session")
def pairwise01():
    return build_pairwise(3, "binary01", frustrated_theta())


@pytest.fixture(scope="session")
def pairwise_ising():
    return build_pairwise(3, "ising", frustrated_theta())


@pytest.fixture(scope="session")
def gaussian():
    return GaussianOscillatorModel()


@pytest.fixture(scope="session")
def cw_small():
    return CurieWeissModel(48, coupling=1.2, field=0.15, beta=0.7)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)

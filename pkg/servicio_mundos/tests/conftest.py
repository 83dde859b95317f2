import numpy as np
import pytest

from app.models.hilbert_models import HermitianOperator
from app.services import worlds

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture
def standard2():
    return worlds.standard_world(2)


@pytest.fixture
def hadamard():
    return worlds.named_world("hadamard", 2)


@pytest.fixture
def sigma_x():
    return HermitianOperator(entries=SIGMA_X)


@pytest.fixture
def sigma_z():
    return HermitianOperator(entries=SIGMA_Z)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

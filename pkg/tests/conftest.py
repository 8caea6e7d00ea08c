import numpy as np
import pytest

from zenocav.core import DensityMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)


@pytest.fixture
def random_rho(rng):
    """Factory for random valid density matrices (full rank, unit trace)."""

    def make() -> DensityMatrix:
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        mat = a @ a.conj().T
        return DensityMatrix(mat / np.trace(mat).real)

    return make

import numpy as np
import pytest

from floquet_ising import ModelSpec


def random_state(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    dim = 1 << n_qubits
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def pd_spec():
    """The period-doubling reference point of the three-qubit ring."""
    return ModelSpec.dimensionless(3, 2.6, 1.57)


@pytest.fixture
def non_pd_spec():
    """The weak-coupling reference point with the same field."""
    return ModelSpec.dimensionless(3, 2.6, 0.1)

import numpy as np
import pytest

from zenosim.states import GeneralizedState, extract_coordinates


def random_density(rng, dim=4):
    """Full-rank random density via a Ginibre matrix."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_valid_state(rng) -> GeneralizedState:
    return extract_coordinates(random_density(rng, 4))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

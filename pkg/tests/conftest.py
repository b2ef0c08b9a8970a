import numpy as np
import pytest

from dualrail import DensityOperator, FockSpace


@pytest.fixture
def space3():
    return FockSpace(3, 1)


@pytest.fixture
def space5():
    return FockSpace(5, 1)


def random_density(space: FockSpace, rng: np.random.Generator) -> DensityOperator:
    """Haar-ish random full-rank density operator."""
    a = rng.normal(size=(space.dim, space.dim)) + 1j * rng.normal(size=(space.dim, space.dim))
    m = a @ a.conj().T
    return DensityOperator(space, m / np.trace(m))


def random_reachable_state(space: FockSpace, basis_vectors, rng: np.random.Generator):
    """Random density operator supported on the span of the given vectors."""
    k = len(basis_vectors)
    a = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    m = a @ a.conj().T
    m /= np.trace(m)
    vecs = np.column_stack(basis_vectors)
    return DensityOperator(space, vecs @ m @ vecs.conj().T)

import numpy as np
import pytest

from gencomm.commutator import TripleInstance


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_hermitian(rng, k):
    x = crandn(rng, k, k)
    return x + x.conj().T


def random_triple(rng, m, n):
    return TripleInstance(crandn(rng, m, n), crandn(rng, n, m), crandn(rng, m, n), provenance="test")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def kron_b_triple():
    ab = np.array([[-1.0, -1.0], [0.0, 0.0]])
    return TripleInstance(ab, ab.copy(), np.diag([2.0, 1.0]))


@pytest.fixture
def rank_triple():
    return TripleInstance(
        np.array([[0, -1, 0], [0, 0, 0], [0, 0, 0]], dtype=float),
        np.diag([1.0, 0.5, 0.5]),
        np.array([[-1, 1, 0], [1, 1, 0], [-1, 0, 0]], dtype=float),
    )

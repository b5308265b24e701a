import numpy as np
import pytest

from skewc.conjugation import apply_conjugation, plain_conjugation, flip_conjugation, random_conjugation


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def unit(rng, n):
    v = cgauss(rng, n)
    return v / np.linalg.norm(v)


def definitional_ctc(C, T, adjoint=False):
    """Matrix of C T C (or C T^* C) built column by column from the action."""
    T = np.asarray(T, dtype=complex)
    op = T.conj().T if adjoint else T
    n = C.dim
    cols = []
    for j in range(n):
        e = np.zeros(n, complex)
        e[j] = 1.0
        cols.append(apply_conjugation(C, op @ apply_conjugation(C, e)))
    return np.stack(cols, axis=1)


def random_skew(C, rng):
    """Random skew-C symmetric matrix: K A with A antisymmetric."""
    A = cgauss(rng, C.dim, C.dim)
    return C.kernel @ (A - A.T)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def plain2():
    return plain_conjugation(2)


@pytest.fixture
def flip2():
    return flip_conjugation(2)


@pytest.fixture(params=range(6))
def random_conj(request):
    n = 1 + (request.param * 3) % 9
    return random_conjugation(n, 100 + request.param)

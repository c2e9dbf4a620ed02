import numpy as np
import pytest

from bidisc import poly as P
from bidisc import rif


@pytest.fixture(scope="session")
def kappa():
    return rif.kappa()


@pytest.fixture(scope="session")
def amy():
    return rif.amy()


@pytest.fixture(scope="session")
def amy_swapped(amy):
    return rif.make_rif(amy.den.transpose())


@pytest.fixture(scope="session")
def psi_mixed():
    # (z1 + 2 z2) / 3
    return rif.SmoothSymbol(P.BivariatePolynomial([[0.0, 2.0 / 3.0],
                                                   [1.0 / 3.0, 0.0]]))


@pytest.fixture(scope="session")
def generic_rif():
    # Stable with no torus zeros: no singularities, no exceptional lines.
    return rif.make_rif(P.BivariatePolynomial([[4, -1], [-1, 0]]))


def random_torus_points(n, seed=0):
    rng = np.random.default_rng(seed)
    ang = rng.uniform(0.0, 2.0 * np.pi, size=(n, 2))
    return np.exp(1j * ang[:, 0]), np.exp(1j * ang[:, 1])


def random_interior_points(n, seed=0, rmax=0.97):
    rng = np.random.default_rng(seed)
    r = rmax * np.sqrt(rng.random((n, 2)))
    ang = rng.uniform(0.0, 2.0 * np.pi, size=(n, 2))
    return r[:, 0] * np.exp(1j * ang[:, 0]), r[:, 1] * np.exp(1j * ang[:, 1])

import numpy as np
import pytest

from nmlambda.model import InitialAtomState, PhysicalParams
from nmlambda.oracle import integrate_schrodinger

FIG2 = PhysicalParams(10.0, 10.0, 1.0, 15.0, -15.0)
RESONANT = PhysicalParams(10.0, 10.0, 1.0, 0.0, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def fig2_trajectory():
    """Default-grid oracle run for the doubly detuned parameters, atom in |f>."""
    return integrate_schrodinger(FIG2, InitialAtomState())


def random_params(rng, g_max=20.0, d_max=20.0):
    g, om = rng.uniform(0, g_max, 2)
    d, dl = rng.uniform(-d_max, d_max, 2)
    return PhysicalParams(g, om, 1.0, d, dl)


def random_init(rng):
    return InitialAtomState(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))

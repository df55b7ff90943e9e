import numpy as np
import pytest

from dweuler import GasModel


@pytest.fixture
def gas():
    return GasModel(1.4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


def random_admissible(rng, n, gas=GasModel(1.4)):
    """Random conserved states with healthy density and pressure."""
    rho = rng.uniform(0.1, 5.0, n)
    u = rng.uniform(-3.0, 3.0, n)
    v = rng.uniform(-3.0, 3.0, n)
    p = rng.uniform(0.05, 8.0, n)
    E = p / (gas.gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    return np.stack([rho, rho * u, rho * v, E], axis=-1)


def ulps_apart(a, b):
    """Distance in units of the larger argument's spacing, elementwise."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    scale = np.maximum(np.abs(a), np.abs(b))
    eps = np.spacing(np.where(scale > 0, scale, 1.0))
    return np.abs(a - b) / eps

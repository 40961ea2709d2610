import pytest

from ellipdw import BoundaryConfig, ModularSetup, WeightVector
from ellipdw.config import draw_spectral


@pytest.fixture(scope="session")
def setup():
    return ModularSetup(tau=1j, eta=0.31)


@pytest.fixture(scope="session")
def setup_complex_eta():
    return ModularSetup(tau=1j, eta=0.3 + 0.1j)


@pytest.fixture(scope="session")
def bc():
    return BoundaryConfig(lambda1=0.41, lambda2=-0.23, zeta=0.17)


@pytest.fixture(scope="session")
def weight():
    return WeightVector(0.31 + 0.02j, -0.11 - 0.07j)


def spectral_draw(n, seed, setup, bc):
    return draw_spectral(n, seed, setup, bc)


@pytest.fixture(scope="session")
def draw():
    """Seeded spectral-configuration factory shared by the suites."""
    def _draw(n, seed, setup, bc):
        return spectral_draw(n, seed, setup, bc)
    return _draw


def random_points(rng, count):
    return rng.uniform(-0.4, 0.4, count) + 1j * rng.uniform(-0.15, 0.15, count)


def random_weight(rng, setup, floor=1e-3):
    from ellipdw.errors import EllipdwError
    while True:
        m = WeightVector(rng.uniform(-0.5, 0.5) + 1j * rng.uniform(-0.12, 0.12),
                         rng.uniform(-0.5, 0.5) + 1j * rng.uniform(-0.12, 0.12))
        try:
            m.require_generic(setup, floor)
            return m
        except EllipdwError:
            continue

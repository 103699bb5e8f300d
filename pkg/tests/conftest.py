import numpy as np
import pytest

from pseudobath import (
    OhmicSD,
    PseudomodeConfig,
    ThermalParams,
    build_pm_bath_matrix,
    discretize,
    eig_hermitian,
)

# Frozen reference values (computed independently at 30 digits with mpmath):
# n(omega) = 1/(exp(omega/T) - 1) at omega = 1.5, T = 46
N_PM_T46 = 30.169384009814307
COINCIDENCE_T46 = 61.338768019628613  # 2 n + 1


@pytest.fixture
def pm():
    return PseudomodeConfig(omega_pm=1.5, g=1.0)


@pytest.fixture
def th46():
    return ThermalParams(temperature=46.0)


@pytest.fixture
def th0():
    return ThermalParams(temperature=0.0)


@pytest.fixture
def small_bath():
    """16-mode strong-coupling bath: cheap, structurally faithful."""
    return discretize(OhmicSD(eta=1.0), 16)


@pytest.fixture
def small_eig(pm, small_bath):
    return eig_hermitian(build_pm_bath_matrix(pm, small_bath))


class _EigCache:
    """Session-wide store for the expensive figure-scale eigendecompositions."""

    def __init__(self):
        self._store = {}

    def bath(self, eta: float, n_modes: int):
        key = ("bath", eta, n_modes)
        if key not in self._store:
            self._store[key] = discretize(OhmicSD(eta=eta), n_modes)
        return self._store[key]

    def pm_bath_eig(self, eta: float, n_modes: int, omega_pm: float = 1.5):
        key = ("eig", eta, n_modes, omega_pm)
        if key not in self._store:
            bath = self.bath(eta, n_modes)
            pm = PseudomodeConfig(omega_pm=omega_pm, g=1.0)
            self._store[key] = eig_hermitian(build_pm_bath_matrix(pm, bath))
        return self._store[key]


@pytest.fixture(scope="session")
def eig_cache():
    return _EigCache()


def assert_allclose(actual, desired, rtol=1e-7, atol=0.0):
    np.testing.assert_allclose(np.asarray(actual), np.asarray(desired), rtol=rtol, atol=atol)

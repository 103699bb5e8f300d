import numpy as np
import pytest

from pseudobath import (
    OhmicSD,
    PseudomodeConfig,
    arrowhead_eigh,
    build_pm_bath_matrix,
    build_propagator_matrix,
    discretize,
    eig_arrowhead,
    eig_hermitian,
)

TOL = 1e-10


def dense_arrowhead(a0, d, kappa):
    n = len(d)
    m = np.zeros((n + 1, n + 1), dtype=complex)
    m[0, 0] = a0
    m[0, 1:] = np.conj(kappa)
    m[1:, 0] = kappa
    m[np.arange(1, n + 1), np.arange(1, n + 1)] = d
    return m


def check_against_dense(m):
    fast = eig_arrowhead(m)
    dense = eig_hermitian(m)
    scale = max(np.max(np.abs(dense.frequencies)), 1.0)
    assert np.max(np.abs(fast.frequencies - dense.frequencies)) < TOL * scale
    assert fast.unitarity_defect() < TOL
    assert fast.reconstruction_defect(m) < TOL


class TestArrowheadSolver:
    def test_random_real(self):
        rng = np.random.default_rng(1)
        for n in (3, 20, 200):
            d = np.sort(rng.uniform(0.1, 10.0, n)) + np.arange(n) * 1e-9
            kappa = rng.uniform(1e-5, 1.0, n)
            check_against_dense(dense_arrowhead(1.5, d, kappa))

    def test_random_complex_couplings(self):
        rng = np.random.default_rng(2)
        n = 60
        d = np.sort(rng.uniform(0.1, 10.0, n)) + np.arange(n) * 1e-9
        kappa = rng.uniform(1e-4, 1.0, n) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        check_against_dense(dense_arrowhead(1.5, d, kappa))

    def test_negative_real_couplings(self):
        d = np.array([0.5, 1.0, 2.0, 3.0])
        kappa = np.array([-0.3, 0.2, -0.1, 0.4])
        check_against_dense(dense_arrowhead(1.2, d, kappa))

    def test_ohmic_bath(self):
        bath = discretize(OhmicSD(eta=1.0), 800)
        m = build_pm_bath_matrix(PseudomodeConfig(omega_pm=1.5), bath)
        check_against_dense(m)

    def test_propagator_matrix_with_imaginary_couplings(self):
        bath = discretize(OhmicSD(eta=0.5), 100)
        g = build_propagator_matrix(PseudomodeConfig(omega_pm=1.5), bath)
        check_against_dense(g)

    def test_zero_couplings_deflate(self):
        d = np.array([0.5, 1.0, 2.0])
        kappa = np.array([0.0, 0.3, 0.0])
        check_against_dense(dense_arrowhead(1.5, d, kappa))

    def test_duplicate_shaft_entries(self):
        d = np.array([1.0, 1.0, 2.0, 3.0, 3.0, 3.0])
        kappa = np.array([0.3, 0.4, 0.05, 0.1, 0.2, 0.2])
        check_against_dense(dense_arrowhead(1.5, d, kappa))

    def test_tip_resonant_with_shaft(self):
        # eigenvalue crowding: a0 sits exactly on a shaft frequency
        d = np.array([0.5, 1.5, 2.5])
        kappa = np.array([0.2, 1e-7, 0.1])
        check_against_dense(dense_arrowhead(1.5, d, kappa))

    def test_weak_coupling_extremes(self):
        rng = np.random.default_rng(5)
        n = 50
        d = np.sort(rng.uniform(0.1, 10.0, n)) + np.arange(n) * 1e-9
        kappa = 10.0 ** rng.uniform(-8, 0, n)
        check_against_dense(dense_arrowhead(5.0, d, kappa))

    def test_data_interface_matches_matrix_interface(self):
        d = np.array([0.5, 1.0, 2.0])
        kappa = np.array([0.1, 0.2, 0.3])
        a = arrowhead_eigh(1.5, d, kappa)
        b = eig_arrowhead(dense_arrowhead(1.5, d, kappa))
        assert np.array_equal(a.frequencies, b.frequencies)

    def test_non_arrowhead_rejected(self):
        m = np.ones((4, 4))
        with pytest.raises(ValueError):
            eig_arrowhead(m)

    def test_interlacing(self):
        rng = np.random.default_rng(9)
        n = 30
        d = np.sort(rng.uniform(0.1, 10.0, n)) + np.arange(n) * 1e-9
        kappa = rng.uniform(1e-3, 0.5, n)
        eig = eig_arrowhead(dense_arrowhead(2.0, d, kappa))
        lam = eig.frequencies
        # strict interlacing: lam_0 < d_0 < lam_1 < ... < d_{n-1} < lam_n
        assert lam[0] < d[0]
        assert lam[-1] > d[-1]
        assert np.all(lam[1:-1] > d[:-1]) and np.all(lam[1:-1] < d[1:])

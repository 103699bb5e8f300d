import numpy as np
import pytest

from pseudobath import (
    BCFGrid,
    DiscretizedBath,
    OhmicSD,
    PseudomodeConfig,
    ThermalParams,
    bcf_components,
    bcf_diagonal,
    bcf_factorizing,
    bcf_factorizing_pairs,
    bcf_standard,
    build_pm_bath_matrix,
    discretize,
    eig_hermitian,
    mean_occupation,
)

import oracles
from conftest import COINCIDENCE_T46


def decoupled_setup(omega_bath=2.5):
    """PM decoupled from a single bath mode: S is the identity."""
    bath = DiscretizedBath(np.array([omega_bath]), np.array([0.0]), np.array([1.0]))
    pm = PseudomodeConfig(omega_pm=1.5, g=1.0)
    eig = eig_hermitian(build_pm_bath_matrix(pm, bath))
    return bath, pm, eig


class TestStandardBCF:
    def test_zero_temperature_coincidence(self):
        bath = discretize(OhmicSD(eta=0.25), 4000)
        grid = bcf_standard(bath, ThermalParams(0.0), [0.0])
        assert grid.values[0, 0] == pytest.approx(0.25, abs=1e-3)

    def test_zero_temperature_continuum_oracle(self):
        # alpha(tau) -> eta Lambda^2 / (1 + i Lambda tau)^2 for the ohmic
        # exponential-cutoff density at T = 0
        bath = discretize(OhmicSD(eta=0.25), 600)
        tau = np.linspace(0.0, 5.0, 26)
        got = bcf_standard(bath, ThermalParams(0.0), tau).series()
        exact = 0.25 / (1.0 + 1j * tau) ** 2
        assert np.max(np.abs(got - exact)) < 1e-3 * 0.25

    def test_tau_one_value(self):
        bath = discretize(OhmicSD(eta=0.25), 4000)
        got = bcf_standard(bath, ThermalParams(0.0), [1.0]).values[0, 0]
        assert abs(got - (-0.125j)) < 1e-3

    def test_coincidence_real_with_thermal_weights(self, th46):
        bath = discretize(OhmicSD(eta=1.0), 64)
        grid = bcf_standard(bath, th46, [0.0])
        n = mean_occupation(bath.frequencies, th46)
        expected = np.sum(bath.couplings**2 * (2 * n + 1))
        assert grid.values[0, 0].imag == pytest.approx(0.0, abs=1e-14)
        assert grid.values[0, 0].real == pytest.approx(expected, rel=1e-12)

    def test_horizon_flag(self, th46):
        bath = discretize(OhmicSD(eta=1.0), 16)
        assert bcf_standard(bath, th46, [bath.recurrence_horizon * 1.5]).beyond_horizon
        assert not bcf_standard(bath, th46, [1.0]).beyond_horizon


class TestFactorizingBCF:
    def test_coincidence_sum_rule(self, pm, small_bath, small_eig, th46):
        grid = bcf_factorizing(small_eig, small_bath, pm, th46, [0.0], [0.0])
        assert abs(grid.values[0, 0] - COINCIDENCE_T46) < 1e-10 * COINCIDENCE_T46

    def test_decoupled_pm_is_stationary_closed_form(self, th46):
        bath, pm, eig = decoupled_setup()
        n = mean_occupation(pm.omega_pm, th46)
        t = np.array([0.0, 0.7, 1.9])
        tp = np.array([0.0, 0.4])
        grid = bcf_factorizing(eig, bath, pm, th46, t, tp)
        tau = t[:, None] - tp[None, :]
        expected = np.exp(1j * pm.omega_pm * tau) * n + np.exp(-1j * pm.omega_pm * tau) * (n + 1)
        np.testing.assert_allclose(grid.values, expected, rtol=1e-12)

    def test_matches_literal_triple_sum(self, th46):
        bath = discretize(OhmicSD(eta=1.0), 8)
        pm = PseudomodeConfig(omega_pm=1.5, g=1.0)
        eig = eig_hermitian(build_pm_bath_matrix(pm, bath))
        t_grid = [0.0, 0.5, 2.3]
        tp_grid = [0.0, 1.1]
        grid = bcf_factorizing(eig, bath, pm, th46, t_grid, tp_grid)
        for i, t in enumerate(t_grid):
            for j, tp in enumerate(tp_grid):
                brute = oracles.factorizing_triple_sum(eig, bath, pm, th46, t, tp)
                assert abs(grid.values[i, j] - brute) < 1e-10 * abs(brute)

    def test_hermitian_pair_symmetry(self, pm, small_bath, small_eig, th46):
        t = np.array([0.3, 1.7, 4.0])
        tp = np.array([0.0, 2.2])
        a = bcf_factorizing(small_eig, small_bath, pm, th46, t, tp)
        b = bcf_factorizing(small_eig, small_bath, pm, th46, tp, t)
        np.testing.assert_allclose(a.values, b.values.conj().T, rtol=0, atol=1e-12 * np.max(np.abs(a.values)))

    def test_equal_time_positive(self, pm, small_bath, small_eig, th46):
        t = np.array([0.0, 1.0, 3.0, 7.0])
        grid = bcf_factorizing(small_eig, small_bath, pm, th46, t, t)
        diag = np.diagonal(grid.values)
        assert np.max(np.abs(diag.imag)) < 1e-10
        assert np.all(diag.real > 0)

    def test_pairs_agree_with_grid(self, pm, small_bath, small_eig, th46):
        t = np.array([0.1, 0.9, 2.4])
        tp = np.array([0.05, 0.8, 2.0])
        pairs = bcf_factorizing_pairs(small_eig, small_bath, pm, th46, t, tp)
        grid = bcf_factorizing(small_eig, small_bath, pm, th46, t, tp)
        np.testing.assert_allclose(pairs, np.diagonal(grid.values), rtol=1e-13)

    def test_alpha1_coincidence(self, pm, small_bath, small_eig, th46):
        grid = bcf_factorizing(small_eig, small_bath, pm, th46, [0.0], [0.0], part="alpha1")
        n = mean_occupation(pm.omega_pm, th46)
        assert abs(grid.values[0, 0] - (n + 1)) < 1e-10 * (n + 1)

    def test_parts_sum_to_full(self, pm, small_bath, small_eig, th46):
        t = np.array([0.0, 1.3])
        tp = np.array([0.2, 2.1])
        full = bcf_factorizing(small_eig, small_bath, pm, th46, t, tp)
        a1 = bcf_factorizing(small_eig, small_bath, pm, th46, t, tp, part="alpha1")
        a2 = bcf_factorizing(small_eig, small_bath, pm, th46, t, tp, part="alpha2")
        np.testing.assert_allclose(a1.values + a2.values, full.values, rtol=1e-14)

    def test_dimension_mismatch_rejected(self, pm, th46, small_eig):
        other = discretize(OhmicSD(eta=1.0), 7)
        with pytest.raises(ValueError):
            bcf_factorizing(small_eig, other, pm, th46, [0.0], [0.0])


class TestDiagonalBCF:
    def test_coincidence_structure(self, pm, small_eig, th46):
        grid = bcf_diagonal(small_eig, pm, th46, [0.0])
        w = np.abs(small_eig.transform[0]) ** 2
        n = mean_occupation(small_eig.frequencies, th46)
        expected = np.sum(w * (2 * n + 1))
        assert grid.values[0, 0].imag == pytest.approx(0.0, abs=1e-12)
        assert grid.values[0, 0].real == pytest.approx(expected, rel=1e-12)

    def test_matches_literal_sum(self, pm, small_eig, th46):
        tau = [0.0, 0.8, 3.3]
        grid = bcf_diagonal(small_eig, pm, th46, tau)
        for k, t in enumerate(tau):
            brute = oracles.diagonal_sum(small_eig, th46, t)
            assert abs(grid.values[k, 0] - brute) < 1e-11 * abs(brute)

    def test_decoupled_single_mode(self, th46):
        _, pm, eig = decoupled_setup()
        n = mean_occupation(pm.omega_pm, th46)
        tau = np.array([0.0, 1.1])
        got = bcf_diagonal(eig, pm, th46, tau).series()
        expected = np.exp(1j * pm.omega_pm * tau) * n + np.exp(-1j * pm.omega_pm * tau) * (n + 1)
        np.testing.assert_allclose(got, expected, rtol=1e-12)

    def test_time_translation_exact_on_dyadic_grid(self, pm, small_eig, th46):
        # dyadic times make (t + delta) - (t' + delta) bit-exact, so the
        # stationary formula must give identical values after translation
        t = np.array([0.0, 0.25, 1.5, 3.75])
        tp = 0.5
        delta = 2.0
        a = bcf_diagonal(small_eig, pm, th46, t - tp)
        b = bcf_diagonal(small_eig, pm, th46, (t + delta) - (tp + delta))
        assert np.array_equal(a.values, b.values)

    @staticmethod
    def _diagonal_series(eta, pm, th, tau):
        bath = discretize(OhmicSD(eta=eta), 800)
        eig = eig_hermitian(build_pm_bath_matrix(pm, bath))
        return bcf_diagonal(eig, pm, th, tau).series()

    def test_equilibration_slows_down_with_coupling(self, pm, th46):
        # while the ringing damps faster, the overall envelope (dominated by
        # thermally amplified low-frequency weight) takes longer to settle
        tau = np.linspace(0.0, 25.0, 2501)

        def late_envelope(eta):
            vals = np.abs(self._diagonal_series(eta, pm, th46, tau))
            late = (tau >= 15.0) & (tau <= 25.0)
            return np.max(vals[late]) / vals[0]

        assert late_envelope(1.0) > 2.0 * late_envelope(0.25)

    def test_components_dispatch(self, pm, small_bath, small_eig, th46):
        tau = np.array([0.0, 1.0])
        a1 = bcf_components(small_eig, small_bath, pm, th46, tau, kind="diagonal", part="alpha1")
        a2 = bcf_components(small_eig, small_bath, pm, th46, tau, kind="diagonal", part="alpha2")
        full = bcf_diagonal(small_eig, pm, th46, tau)
        np.testing.assert_allclose(a1.values + a2.values, full.values, rtol=1e-14)
        with pytest.raises(ValueError):
            bcf_components(small_eig, small_bath, pm, th46, tau, kind="standard", part="full")

    def test_alpha2_vanishes_at_zero_temperature(self, pm, small_eig, th0):
        grid = bcf_diagonal(small_eig, pm, th0, [0.0, 1.0, 2.0], part="alpha2")
        assert np.max(np.abs(grid.values)) == 0.0


class TestNonStationarityDecay:
    def test_factorizing_equilibrates_by_reference_time(self, pm, th46):
        # moderate-N rendition of the stationarity-onset claim; the full
        # figure-scale version lives in the acceptance suite
        bath = discretize(OhmicSD(eta=1.0), 600)
        eig = eig_hermitian(build_pm_bath_matrix(pm, bath))
        tau = np.linspace(0.0, 15.0, 151)
        alpha_d = bcf_diagonal(eig, pm, th46, tau).series()
        deviations = {}
        for tp in (0.0, 32.5):
            alpha_f = bcf_factorizing_pairs(eig, bath, pm, th46, tp + tau, np.full_like(tau, tp))
            deviations[tp] = np.max(np.abs(alpha_f - alpha_d))
        assert deviations[32.5] < 0.1 * deviations[0.0]


class TestBCFGridType:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            BCFGrid(t_grid=[0.0, 1.0], tprime_grid=[0.0], values=np.zeros((1, 1)), kind="diagonal")

    def test_kind_and_part_validation(self):
        with pytest.raises(ValueError):
            BCFGrid(t_grid=[0.0], tprime_grid=[0.0], values=np.zeros((1, 1)), kind="bogus")
        with pytest.raises(ValueError):
            BCFGrid(t_grid=[0.0], tprime_grid=[0.0], values=np.zeros((1, 1)),
                    kind="diagonal", part="bogus")

    def test_finite_values_required(self):
        with pytest.raises(ValueError):
            BCFGrid(t_grid=[0.0], tprime_grid=[0.0],
                    values=np.array([[np.inf]]), kind="diagonal")

    def test_tau_accessor(self):
        grid = BCFGrid(t_grid=[1.0, 2.0], tprime_grid=[1.0],
                       values=np.ones((2, 1), dtype=complex), kind="diagonal")
        np.testing.assert_array_equal(grid.tau, [0.0, 1.0])
        with pytest.raises(ValueError):
            BCFGrid(t_grid=[1.0], tprime_grid=[0.0, 1.0],
                    values=np.ones((1, 2), dtype=complex), kind="diagonal").tau

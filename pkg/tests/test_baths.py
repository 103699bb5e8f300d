import math

import numpy as np
import pytest

from pseudobath import (
    DiscretizedBath,
    OhmicSD,
    ThermalParams,
    discretize,
    mean_occupation,
    ohmic_sd,
)

from conftest import N_PM_T46


class TestOhmicSD:
    def test_zero_frequency(self):
        assert ohmic_sd(0.0, OhmicSD(eta=1.0, lambda_c=1.0)) == 0.0

    def test_closed_form_values(self):
        assert ohmic_sd(1.0, OhmicSD(eta=1.0)) == pytest.approx(math.exp(-1.0), rel=1e-15)
        assert ohmic_sd(1.0, OhmicSD(eta=0.25)) == pytest.approx(0.25 * math.exp(-1.0), rel=1e-15)

    def test_vectorized(self):
        sd = OhmicSD(eta=0.5, lambda_c=2.0)
        w = np.array([0.0, 1.0, 4.0])
        np.testing.assert_allclose(ohmic_sd(w, sd), 0.5 * w * np.exp(-w / 2.0), rtol=1e-15)

    def test_negative_frequency_rejected(self):
        with pytest.raises(ValueError):
            ohmic_sd(-0.1, OhmicSD(eta=1.0))

    def test_invalid_parameters_rejected(self):
        with pytest.raises(ValueError):
            OhmicSD(eta=0.0)
        with pytest.raises(ValueError):
            OhmicSD(eta=1.0, lambda_c=-1.0)

    def test_closed_form_integrals(self):
        sd = OhmicSD(eta=0.7, lambda_c=1.3)
        assert sd.total_weight == pytest.approx(0.7 * 1.3**2, rel=1e-15)
        # numerical quadrature cross-check of the antiderivative
        w = np.linspace(0.1, 5.0, 40001)
        numeric = np.trapezoid(ohmic_sd(w, sd), w)
        assert sd.integral(0.1, 5.0) == pytest.approx(numeric, rel=1e-8)


class TestMeanOccupation:
    def test_log2_identity(self):
        assert mean_occupation(math.log(2.0), ThermalParams(1.0)) == pytest.approx(1.0, rel=1e-14)

    def test_zero_temperature(self):
        assert mean_occupation(1.5, ThermalParams(0.0)) == 0.0

    def test_high_temperature_value(self):
        # frozen from a 30-digit evaluation of 1/(e^{1.5/46} - 1)
        assert mean_occupation(1.5, ThermalParams(46.0)) == pytest.approx(N_PM_T46, rel=1e-14)

    def test_series_crosscheck(self):
        # n(w) = T/w - 1/2 + w/(12 T) + O((w/T)^3)
        th = ThermalParams(46.0)
        w = 1.5
        series = 46.0 / w - 0.5 + w / (12 * 46.0)
        assert mean_occupation(w, th) == pytest.approx(series, abs=1e-6)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            mean_occupation(0.0, ThermalParams(1.0))
        with pytest.raises(ValueError):
            mean_occupation(-1.0, ThermalParams(1.0))
        with pytest.raises(ValueError):
            ThermalParams(-0.5)

    def test_beta_sentinel(self):
        assert ThermalParams(0.0).beta == math.inf
        assert ThermalParams(2.0).beta == 0.5

    def test_large_beta_omega_underflows_to_zero(self):
        assert mean_occupation(1e4, ThermalParams(1e-2)) == 0.0


class TestDiscretize:
    def test_three_mode_grid(self):
        bath = discretize(OhmicSD(eta=1.0), 3, omega_min=0.002, omega_max=1.0)
        np.testing.assert_allclose(bath.frequencies, [0.002, 0.501, 1.0], rtol=1e-15)
        np.testing.assert_allclose(bath.weights, [0.499, 0.499, 0.499], rtol=1e-12)

    def test_two_mode_endpoint_rule(self):
        bath = discretize(OhmicSD(eta=1.0), 2, omega_min=0.5, omega_max=2.0)
        np.testing.assert_allclose(bath.weights, [1.5, 1.5], rtol=1e-15)

    def test_couplings_are_quadrature_exact(self):
        sd = OhmicSD(eta=0.3, lambda_c=1.7)
        bath = discretize(sd, 57, omega_min=0.01, omega_max=8.0)
        expected = np.sqrt(ohmic_sd(bath.frequencies, sd) * bath.weights)
        assert np.array_equal(bath.couplings, expected)

    def test_sum_rule_at_default_range(self):
        sd = OhmicSD(eta=0.25)
        bath = discretize(sd, 4000)
        assert bath.coupling_weight() == pytest.approx(0.25, abs=1e-3)

    def test_convergence_towards_range_integral(self):
        # against eta*Lambda^2 the error bottoms out at the range-truncation
        # floor (~5e-4 * eta for [0.002, 10]) before N = 4000, so monotone
        # convergence is asserted against the closed-form truncated integral
        sd = OhmicSD(eta=0.25)
        exact_range = sd.integral(0.002, 10.0)
        errors = []
        errors_vs_total = []
        for n in (100, 1000, 4000):
            s = discretize(sd, n).coupling_weight()
            errors.append(abs(s - exact_range))
            errors_vs_total.append(abs(s - sd.total_weight))
        assert errors[0] > errors[1] > errors[2]
        assert errors_vs_total[0] > errors_vs_total[1]
        assert errors_vs_total[2] < 1e-3

    def test_recurrence_horizon(self):
        bath = discretize(OhmicSD(eta=1.0), 4000)
        assert bath.recurrence_horizon == pytest.approx(2513.148, abs=0.01)

    def test_config_errors(self):
        with pytest.raises(ValueError):
            discretize(OhmicSD(eta=1.0), 1)
        with pytest.raises(ValueError):
            discretize(OhmicSD(eta=1.0), 10, omega_min=2.0, omega_max=1.0)
        with pytest.raises(ValueError):
            discretize(OhmicSD(eta=1.0), 10, omega_min=0.0, omega_max=1.0)


class TestDiscretizedBath:
    def test_direct_construction_invariants(self):
        with pytest.raises(ValueError):
            DiscretizedBath(np.array([1.0, 0.5]), np.array([0.1, 0.1]), np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            DiscretizedBath(np.array([-1.0, 0.5]), np.array([0.1, 0.1]), np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            DiscretizedBath(np.array([1.0, 2.0]), np.array([0.1]), np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            DiscretizedBath(np.array([1.0, 2.0]), np.array([-0.1, 0.1]), np.array([1.0, 1.0]))

    def test_arrays_immutable(self):
        bath = discretize(OhmicSD(eta=1.0), 8)
        with pytest.raises(ValueError):
            bath.frequencies[0] = 0.5

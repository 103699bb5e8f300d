"""Continuous spectral densities, thermal occupation, and bath discretization.

All frequencies are measured in units of the cutoff ``lambda_c`` (conventionally
set to 1), times in inverse-cutoff units, and ``hbar = k_B = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "OhmicSD",
    "ThermalParams",
    "DiscretizedBath",
    "PseudomodeConfig",
    "ohmic_sd",
    "mean_occupation",
    "discretize",
]


@dataclass(frozen=True)
class OhmicSD:
    """Ohmic spectral density with exponential cutoff, J(w) = eta * w * exp(-w/lambda_c)."""

    eta: float
    lambda_c: float = 1.0

    def __post_init__(self) -> None:
        if self.eta <= 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.lambda_c <= 0:
            raise ValueError(f"lambda_c must be positive, got {self.lambda_c}")

    def __call__(self, omega):
        return ohmic_sd(omega, self)

    @property
    def total_weight(self) -> float:
        """Closed-form integral of J over [0, inf): eta * lambda_c**2."""
        return self.eta * self.lambda_c**2

    def integral(self, omega_lo: float, omega_hi: float) -> float:
        """Closed-form integral of J over [omega_lo, omega_hi]."""
        lam = self.lambda_c

        def antiderivative(w: float) -> float:
            return -self.eta * lam * math.exp(-w / lam) * (w + lam)

        return antiderivative(omega_hi) - antiderivative(omega_lo)


@dataclass(frozen=True)
class ThermalParams:
    """Environment temperature; T = 0 is represented by an infinite inverse temperature."""

    temperature: float

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError(f"temperature must be non-negative, got {self.temperature}")

    @property
    def beta(self) -> float:
        """Inverse temperature 1/T; +inf at T = 0 so that n(w) vanishes exactly."""
        if self.temperature == 0:
            return math.inf
        return 1.0 / self.temperature


@dataclass(frozen=True)
class PseudomodeConfig:
    """Frequency of the pseudomode and its (possibly complex) coupling to the system."""

    omega_pm: float
    g: complex = 1.0

    def __post_init__(self) -> None:
        if self.omega_pm <= 0:
            raise ValueError(f"omega_pm must be positive, got {self.omega_pm}")

    @property
    def g_squared(self) -> float:
        return abs(self.g) ** 2


@dataclass(frozen=True)
class DiscretizedBath:
    """Finite set of bath modes sampled from a spectral density.

    The couplings obey ``kappa[i] = sqrt(J(frequencies[i]) * weights[i])`` where
    ``weights`` are the frequency-bin widths of the sampling rule.
    """

    frequencies: np.ndarray
    couplings: np.ndarray
    weights: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        freqs = np.asarray(self.frequencies, dtype=float)
        coups = np.asarray(self.couplings, dtype=float)
        wghts = np.asarray(self.weights, dtype=float)
        if not (len(freqs) == len(coups) == len(wghts)):
            raise ValueError("frequencies, couplings and weights must have equal length")
        if len(freqs) == 0:
            raise ValueError("bath must contain at least one mode")
        if np.any(freqs <= 0):
            raise ValueError("all bath frequencies must be positive")
        if np.any(np.diff(freqs) <= 0):
            raise ValueError("bath frequencies must be strictly increasing")
        if np.any(coups < 0):
            raise ValueError("couplings must be non-negative")
        for name, arr in (("frequencies", freqs), ("couplings", coups), ("weights", wghts)):
            object.__setattr__(self, name, arr)
            arr.setflags(write=False)

    @property
    def n_modes(self) -> int:
        return len(self.frequencies)

    @property
    def recurrence_horizon(self) -> float:
        """Time 2*pi/max(dw) beyond which the finite bath shows artificial revivals."""
        if self.n_modes == 1:
            return math.inf
        return 2.0 * math.pi / float(np.max(np.diff(self.frequencies)))

    def coupling_weight(self) -> float:
        """Sum of kappa**2, the discrete estimate of the integrated spectral density."""
        return float(np.sum(self.couplings**2))


def ohmic_sd(omega, sd: OhmicSD):
    """Evaluate the ohmic spectral density eta * w * exp(-w / lambda_c).

    Parameters
    ----------
    omega : float or ndarray
        Frequency (or frequencies), must be non-negative.
    sd : OhmicSD
        Spectral-density parameters.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("ohmic_sd is defined for omega >= 0 only")
    values = sd.eta * w * np.exp(-w / sd.lambda_c)
    if np.isscalar(omega) or w.ndim == 0:
        return float(values)
    return values


def mean_occupation(omega, th: ThermalParams):
    """Bose-Einstein occupation n(w) = 1/(exp(beta*w) - 1), with n = 0 at T = 0.

    Diverges at w = 0, so strictly positive frequencies are required.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("mean_occupation requires omega > 0 (diverges at omega = 0)")
    if math.isinf(th.beta):
        values = np.zeros_like(w)
    else:
        with np.errstate(over="ignore"):
            values = 1.0 / np.expm1(th.beta * w)
    if np.isscalar(omega) or w.ndim == 0:
        return float(values)
    return values


def discretize(
    sd: OhmicSD,
    n_modes: int,
    omega_min: float = 0.002,
    omega_max: float = 10.0,
) -> DiscretizedBath:
    """Sample a spectral density on an equidistant frequency grid.

    Bin widths follow the midpoint rule with doubled end bins:
    ``dw[i] = (w[i+1] - w[i-1])/2`` in the interior, ``dw = w[1]-w[0]`` and
    ``w[-1]-w[-2]`` at the edges.  The default grid ``[0.002, 10]`` (in cutoff
    units) covers the ohmic density up to a relative tail of ~5e-4.

    Parameters
    ----------
    sd : OhmicSD
        Continuous spectral density to sample.
    n_modes : int
        Number of bath oscillators (>= 2).
    omega_min, omega_max : float
        Sampling range, 0 < omega_min < omega_max.

    Returns
    -------
    DiscretizedBath
        Frequencies, couplings ``sqrt(J(w) dw)`` and bin widths.
    """
    if n_modes < 2:
        raise ValueError(f"n_modes must be at least 2, got {n_modes}")
    if not (0 < omega_min < omega_max):
        raise ValueError(
            f"require 0 < omega_min < omega_max, got [{omega_min}, {omega_max}]"
        )
    freqs = np.linspace(omega_min, omega_max, n_modes)
    dw = np.empty(n_modes)
    dw[1:-1] = (freqs[2:] - freqs[:-2]) / 2.0
    dw[0] = freqs[1] - freqs[0]
    dw[-1] = freqs[-1] - freqs[-2]
    couplings = np.sqrt(ohmic_sd(freqs, sd) * dw)
    return DiscretizedBath(frequencies=freqs, couplings=couplings, weights=dw)

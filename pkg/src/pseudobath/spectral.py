"""Recovery of the transformed spectral density from BCF data.

Fourier convention: the forward transform is

    alpha_tilde(omega) = int dtau e^{+i omega tau} alpha(tau),

the inverse carries e^{-i omega tau} and the 1/(2 pi).  For a stationary
thermal BCF the spectral density follows by dividing out the thermal factor,

    J(omega) = alpha_tilde(omega) / (2 pi (n(omega) + 1)),   omega > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.fft import ifft, next_fast_len
from scipy.signal import find_peaks

from .baths import DiscretizedBath, PseudomodeConfig, ThermalParams, mean_occupation
from .bcf import KIND_FACTORIZING, BCFGrid, bcf_factorizing_pairs
from .linalg import EigenSystem

__all__ = [
    "SpectralFunction",
    "FOURIER_CONVENTION",
    "bcf_fourier",
    "extract_sd",
    "factorizing_tau_slice",
    "default_window",
    "bose_einstein_continued",
    "detailed_balance_defect",
    "peak_positions",
]

FOURIER_CONVENTION = "alpha_tilde(omega) = int dtau e^{+i omega tau} alpha(tau)"

WINDOW_RECT = "rect"
WINDOW_HANN = "hann"


@dataclass(frozen=True)
class SpectralFunction:
    """Real-valued spectral data on a frequency grid.

    Holds either the two-sided transform alpha_tilde (omega of both signs) or
    an extracted spectral density on positive frequencies.  ``noise_floor``
    reports the largest imaginary residue discarded by the FFT pipeline and
    bounds spurious negative excursions of the result.
    """

    omega_grid: np.ndarray
    values: np.ndarray
    t_cm: float | None = None
    resolution: float | None = None
    window: float | None = None
    window_type: str = WINDOW_RECT
    noise_floor: float = 0.0

    def __post_init__(self) -> None:
        omega = np.atleast_1d(np.asarray(self.omega_grid, dtype=float))
        vals = np.atleast_1d(np.asarray(self.values, dtype=float))
        if omega.shape != vals.shape:
            raise ValueError("omega_grid and values must have matching shapes")
        object.__setattr__(self, "omega_grid", omega)
        object.__setattr__(self, "values", vals)
        omega.setflags(write=False)
        vals.setflags(write=False)


def _tau_samples(bcf: BCFGrid) -> tuple[np.ndarray, np.ndarray, float]:
    if len(bcf.tprime_grid) != 1:
        raise ValueError("bcf_fourier expects a tau-sampled BCF (single reference time)")
    tau = bcf.tau
    if len(tau) < 2 or tau[0] != 0.0:
        raise ValueError("tau grid must start at 0 with at least two samples")
    steps = np.diff(tau)
    dtau = float(steps[0])
    if dtau <= 0 or np.max(np.abs(steps - dtau)) > 1e-9:
        raise ValueError("tau grid must be uniform")
    return tau, bcf.series(), dtau


def default_window(bcf: BCFGrid, horizon: float | None = None, decay_rel: float = 1e-4) -> float:
    """Window length: time for |alpha| to decay below ``decay_rel`` of |alpha(0)|.

    A finite discretized bath never decays all the way: |alpha| plateaus at an
    incoherent dephasing floor set by the mode density.  The decay threshold is
    therefore floored at that plateau (the largest |alpha| over the trailing
    quarter of the sampled range), and the window is where the tail maximum of
    |alpha| first reaches it.  Capped at half the recurrence horizon when
    given.  Peak-splitting detection is window-sensitive, so the chosen value
    is recorded on the output of :func:`bcf_fourier`.
    """
    tau, values, _ = _tau_samples(bcf)
    magnitude = np.abs(values)
    # largest remaining |alpha| at or after each sample, scanned from the tail;
    # the 5% margin keeps asymptotic creep towards the floor from dragging the
    # window out to the end of the data
    tail_max = np.maximum.accumulate(magnitude[::-1])[::-1]
    plateau = tail_max[(3 * len(tau)) // 4]
    threshold = max(decay_rel * magnitude[0], 1.05 * plateau)
    below = np.flatnonzero(tail_max <= threshold)
    window = float(tau[below[0]]) if below.size else float(tau[-1])
    window = max(window, float(tau[min(2, len(tau) - 1)]))
    if horizon is not None:
        window = min(window, horizon / 2.0)
    return min(window, float(tau[-1]))


def bcf_fourier(
    bcf: BCFGrid,
    t_cm: float = 0.0,
    window: float | None = None,
    window_type: str = WINDOW_RECT,
    pad_factor: int = 4,
) -> SpectralFunction:
    """Discrete approximation of alpha_tilde(omega) from tau-sampled BCF data.

    Negative-tau samples are generated from the Hermitian symmetry
    alpha(-tau) = conj(alpha(tau)) (exact for stationary input and for
    factorizing input sliced symmetrically about t_cm).  The spectrum is
    zero-padded by ``pad_factor`` for dense frequency sampling; the physical
    resolution stays 2 pi / window.

    Parameters
    ----------
    bcf : BCFGrid
        Uniform tau samples starting at tau = 0 (single reference time).
    t_cm : float
        Center-of-mass time at which the samples were taken (metadata).
    window : float, optional
        Truncation time; defaults to the full available range.
    window_type : {"rect", "hann"}
        Apodization; Hann suppresses sidelobes at the cost of resolution.
    """
    tau, series, dtau = _tau_samples(bcf)
    if window is None:
        window = float(tau[-1])
    if window <= 0 or window > tau[-1] + 1e-9:
        raise ValueError(f"window {window} outside available tau range (0, {tau[-1]}]")
    m = int(np.searchsorted(tau, window + 1e-9))
    m = max(m, 2)
    tau = tau[:m]
    series = series[:m].copy()

    if window_type == WINDOW_HANN:
        series *= 0.5 * (1.0 + np.cos(math.pi * tau / tau[-1]))
    elif window_type != WINDOW_RECT:
        raise ValueError(f"unknown window type {window_type!r}")

    n_sym = 2 * m - 1
    length = next_fast_len(pad_factor * n_sym)
    wrapped = np.zeros(length, dtype=complex)
    wrapped[:m] = series
    wrapped[length - (m - 1) :] = series[1:][::-1].conj()
    spectrum = dtau * length * ifft(wrapped)

    omega = 2.0 * math.pi * np.fft.fftfreq(length, d=dtau)
    order = np.fft.fftshift(np.arange(length))
    omega = omega[order]
    spectrum = spectrum[order]
    noise = float(np.max(np.abs(spectrum.imag)))
    return SpectralFunction(
        omega_grid=omega,
        values=spectrum.real,
        t_cm=t_cm,
        resolution=2.0 * math.pi / float(tau[-1]),
        window=float(tau[-1]),
        window_type=window_type,
        noise_floor=noise,
    )


def extract_sd(
    alpha_omega: SpectralFunction,
    th: ThermalParams,
    omega_floor: float = 0.002,
    omega_max: float | None = None,
) -> SpectralFunction:
    """Spectral density J(omega) = alpha_tilde(omega) / (2 pi (n(omega)+1)).

    Only frequencies above ``omega_floor`` are returned; below it the thermal
    division amplifies FFT noise without physical content.
    """
    if omega_floor <= 0:
        raise ValueError("omega_floor must be positive (thermal factor singular at 0)")
    omega = alpha_omega.omega_grid
    mask = omega > omega_floor
    if omega_max is not None:
        mask &= omega <= omega_max
    if not np.any(mask):
        raise ValueError("no frequencies above omega_floor in the input grid")
    omega_sel = omega[mask]
    n = np.asarray(mean_occupation(omega_sel, th), dtype=float)
    values = alpha_omega.values[mask] / (2.0 * math.pi * (n + 1.0))
    return SpectralFunction(
        omega_grid=omega_sel,
        values=values,
        t_cm=alpha_omega.t_cm,
        resolution=alpha_omega.resolution,
        window=alpha_omega.window,
        window_type=alpha_omega.window_type,
        noise_floor=alpha_omega.noise_floor,
    )


def factorizing_tau_slice(
    eig: EigenSystem,
    bath: DiscretizedBath,
    pm: PseudomodeConfig,
    th: ThermalParams,
    t_cm: float,
    tau_grid,
) -> BCFGrid:
    """Factorizing BCF along (t_cm + tau/2, t_cm - tau/2) as a tau-sampled grid.

    At fixed t_cm the pair swap tau -> -tau conjugates the value exactly, so
    only tau >= 0 is evaluated and the returned grid feeds straight into
    :func:`bcf_fourier`.
    """
    tau = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    if np.any(tau < 0):
        raise ValueError("tau grid must be non-negative")
    if np.max(tau) > 2.0 * t_cm + 1e-12:
        raise ValueError("tau/2 may not exceed t_cm (t' would be negative)")
    values = bcf_factorizing_pairs(eig, bath, pm, th, t_cm + tau / 2.0, t_cm - tau / 2.0)
    return BCFGrid(
        t_grid=tau,
        tprime_grid=np.zeros(1),
        values=values[:, None],
        kind=KIND_FACTORIZING,
        beyond_horizon=float(np.max(tau)) > bath.recurrence_horizon,
    )


def bose_einstein_continued(omega, th: ThermalParams):
    """Occupation formula 1/(e^{beta omega} - 1) extended to omega != 0 of either sign.

    Satisfies n(-omega) = -(n(omega) + 1); at T = 0 it evaluates to 0 for
    positive and -1 for negative frequencies.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w == 0):
        raise ValueError("occupation diverges at omega = 0")
    if math.isinf(th.beta):
        values = np.where(w > 0, 0.0, -1.0)
    else:
        with np.errstate(over="ignore"):
            values = 1.0 / np.expm1(th.beta * w)
    if np.isscalar(omega) or w.ndim == 0:
        return float(values)
    return values


def detailed_balance_defect(
    alpha_omega: SpectralFunction, th: ThermalParams, support_rel: float = 0.05
) -> float:
    """Max relative violation of alpha_tilde(omega) = e^{beta omega} alpha_tilde(-omega).

    Compared on symmetric +/- omega bin pairs where both sides carry at least
    ``support_rel`` of the spectral maximum, which keeps FFT leakage from
    dominating the ratio.
    """
    omega = alpha_omega.omega_grid
    vals = alpha_omega.values
    zero = int(np.flatnonzero(omega == 0.0)[0])
    n_pairs = min(zero, len(omega) - zero - 1)
    idx = np.arange(1, n_pairs + 1)
    plus = vals[zero + idx]
    minus = vals[zero - idx]
    w_plus = omega[zero + idx]
    scale = np.max(np.abs(vals))
    mask = (np.abs(plus) >= support_rel * scale) & (np.abs(minus) >= support_rel * scale)
    if not np.any(mask):
        raise ValueError("no frequency bins above the support threshold")
    expected = np.exp(th.beta * w_plus[mask]) * minus[mask]
    return float(np.max(np.abs(plus[mask] - expected) / np.abs(expected)))


def peak_positions(sf: SpectralFunction, rel_height: float = 0.05) -> np.ndarray:
    """Frequencies of local maxima rising above ``rel_height`` of the global peak."""
    peaks, _ = find_peaks(sf.values, height=rel_height * float(np.max(sf.values)))
    return sf.omega_grid[peaks]

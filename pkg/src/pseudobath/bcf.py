"""Closed-form bath correlation functions of the transformed environment.

Three families are provided, all evaluated from eigendecompositions of the
pseudomode+bath coupling matrix:

* the standard thermal BCF of a diagonal (uncoupled-oscillator) bath,
* the transformed BCF for a factorizing pseudomode/bath initial state, which
  is genuinely two-time (non-stationary), and
* the transformed BCF for the global thermal ("diagonal") initial state,
  which depends on the time difference only.

Values are reported divided by |g|^2 by default, matching the usual plotting
convention for the transformed functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .baths import DiscretizedBath, PseudomodeConfig, ThermalParams, mean_occupation
from .linalg import EigenSystem

__all__ = [
    "KIND_STANDARD",
    "KIND_FACTORIZING",
    "KIND_DIAGONAL",
    "PART_FULL",
    "PART_ALPHA1",
    "PART_ALPHA2",
    "BCFGrid",
    "bcf_standard",
    "bcf_factorizing",
    "bcf_diagonal",
    "bcf_components",
    "bcf_factorizing_pairs",
]

KIND_STANDARD = "standard"
KIND_FACTORIZING = "factorizing"
KIND_DIAGONAL = "diagonal"
_KINDS = (KIND_STANDARD, KIND_FACTORIZING, KIND_DIAGONAL)

PART_FULL = "full"
PART_ALPHA1 = "alpha1"
PART_ALPHA2 = "alpha2"
_PARTS = (PART_FULL, PART_ALPHA1, PART_ALPHA2)

# exponential-phase blocks are evaluated in column chunks to bound memory at
# bath sizes of a few thousand modes
_CHUNK = 1024


@dataclass(frozen=True)
class BCFGrid:
    """Complex alpha(t, t') samples on a rectangular (t, t') grid.

    ``values[i, j]`` corresponds to ``(t_grid[i], tprime_grid[j])``.  Stationary
    kinds are usually sampled with ``tprime_grid == [0]`` so that ``t_grid``
    doubles as the time-difference grid.  ``per_g_squared`` records whether the
    values were divided by |g|^2; ``method`` tags which derivation produced
    them.  ``beyond_horizon`` is set when any sampled time difference exceeds
    the recurrence horizon of the underlying discretized bath.
    """

    t_grid: np.ndarray
    tprime_grid: np.ndarray
    values: np.ndarray
    kind: str
    part: str = PART_FULL
    per_g_squared: bool = True
    method: str = "eigenbasis"
    beyond_horizon: bool = False

    def __post_init__(self) -> None:
        t = np.atleast_1d(np.asarray(self.t_grid, dtype=float))
        tp = np.atleast_1d(np.asarray(self.tprime_grid, dtype=float))
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (len(t), len(tp)):
            raise ValueError(
                f"values shape {vals.shape} does not match grids ({len(t)}, {len(tp)})"
            )
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.part not in _PARTS:
            raise ValueError(f"unknown part {self.part!r}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("BCF values must be finite")
        object.__setattr__(self, "t_grid", t)
        object.__setattr__(self, "tprime_grid", tp)
        object.__setattr__(self, "values", vals)
        for arr in (t, tp, vals):
            arr.setflags(write=False)

    @property
    def tau(self) -> np.ndarray:
        """Time-difference grid for single-reference-time sampling."""
        if len(self.tprime_grid) != 1:
            raise ValueError("tau is only defined for a single reference time")
        return self.t_grid - self.tprime_grid[0]

    def series(self) -> np.ndarray:
        """Values as a 1-D array for single-reference-time sampling."""
        if len(self.tprime_grid) != 1:
            raise ValueError("series() requires a single reference time")
        return self.values[:, 0]


def _occupations(omega: np.ndarray, th: ThermalParams) -> np.ndarray:
    return np.asarray(mean_occupation(omega, th), dtype=float)


def _horizon_flag(bath: DiscretizedBath | None, max_tau: float) -> bool:
    return bath is not None and max_tau > bath.recurrence_horizon


def _phase_weighted_sum(
    omega: np.ndarray, w_plus: np.ndarray, w_minus: np.ndarray, tau: np.ndarray
) -> np.ndarray:
    """sum_k [w_plus[k] e^{-i w_k tau} + w_minus[k] e^{+i w_k tau}], chunked over tau."""
    tau = np.asarray(tau, dtype=float)
    out = np.empty(tau.shape, dtype=complex)
    flat = tau.ravel()
    res = out.ravel()
    for lo in range(0, len(flat), _CHUNK):
        block = np.exp(-1j * np.outer(omega, flat[lo : lo + _CHUNK]))
        res[lo : lo + _CHUNK] = w_plus @ block + w_minus @ block.conj()
    return out


def bcf_standard(
    bath: DiscretizedBath, th: ThermalParams, tau_grid
) -> BCFGrid:
    """Standard thermal BCF of a diagonal bath evaluated on a tau grid.

    alpha(tau) = sum_k kappa_k^2 [ (n(w_k)+1) e^{-i w_k tau} + n(w_k) e^{+i w_k tau} ].
    """
    tau = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    k2 = bath.couplings.astype(float) ** 2
    n = _occupations(bath.frequencies, th)
    values = _phase_weighted_sum(bath.frequencies, k2 * (n + 1.0), k2 * n, tau)
    return BCFGrid(
        t_grid=tau,
        tprime_grid=np.zeros(1),
        values=values[:, None],
        kind=KIND_STANDARD,
        per_g_squared=False,
        beyond_horizon=_horizon_flag(bath, float(np.max(np.abs(tau), initial=0.0))),
    )


def _check_eig_matches(eig: EigenSystem, bath: DiscretizedBath) -> None:
    if eig.dim != bath.n_modes + 1:
        raise ValueError(
            f"eigensystem dimension {eig.dim} does not match bath with "
            f"{bath.n_modes} modes (+1 pseudomode slot)"
        )


def _mode_amplitudes(eig: EigenSystem, t_values: np.ndarray) -> np.ndarray:
    """F[eta, k] = sum_mu conj(S[0, mu]) S[eta, mu] e^{+i w_mu t_k}.

    Row eta of F carries the projection of the evolved pseudomode operator onto
    original mode eta; F(0) is the unit vector on the PM slot.
    """
    s = eig.transform
    s0c = s[0].conj()
    out = np.empty((eig.dim, len(t_values)), dtype=complex)
    for lo in range(0, len(t_values), _CHUNK):
        phases = np.exp(1j * np.outer(eig.frequencies, t_values[lo : lo + _CHUNK]))
        weighted = s0c[:, None] * phases
        if np.iscomplexobj(s):
            out[:, lo : lo + _CHUNK] = s @ weighted
        else:
            # contiguous copies of the re/im parts keep the products on the
            # BLAS fast path (strided views fall back to slow loops)
            real_part = s @ np.ascontiguousarray(weighted.real)
            imag_part = s @ np.ascontiguousarray(weighted.imag)
            out[:, lo : lo + _CHUNK] = real_part + 1j * imag_part
    return out


def _factorizing_occupations(
    pm: PseudomodeConfig, bath: DiscretizedBath, th: ThermalParams
) -> np.ndarray:
    omega_orig = np.concatenate(([pm.omega_pm], bath.frequencies))
    return _occupations(omega_orig, th)


def _combine_parts(term_n1: np.ndarray, term_n: np.ndarray, part: str) -> np.ndarray:
    if part == PART_ALPHA1:
        return term_n1
    if part == PART_ALPHA2:
        return term_n
    return term_n1 + term_n


def bcf_factorizing(
    eig: EigenSystem,
    bath: DiscretizedBath,
    pm: PseudomodeConfig,
    th: ThermalParams,
    t_grid,
    tprime_grid,
    part: str = PART_FULL,
) -> BCFGrid:
    """Transformed BCF for the factorizing PM/bath initial state, on a (t, t') grid.

    The initial occupations are those of the uncoupled modes (the PM at its bare
    frequency and each bath oscillator at its own), while the time evolution
    runs in the coupled eigenbasis; the result is non-stationary at early
    reference times.  The triple eigenmode sum is contracted through the mode
    amplitudes F so each time sample costs one matrix-vector product.

    ``part`` selects the (n+1)-weighted component ("alpha1", the <B B^dagger>
    family), the n-weighted component ("alpha2"), or their sum.
    """
    _check_eig_matches(eig, bath)
    if part not in _PARTS:
        raise ValueError(f"unknown part {part!r}")
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    tp = np.atleast_1d(np.asarray(tprime_grid, dtype=float))
    n_orig = _factorizing_occupations(pm, bath, th)

    t_all, inverse = np.unique(np.concatenate([t, tp]), return_inverse=True)
    f_all = _mode_amplitudes(eig, t_all)
    f_t = f_all[:, inverse[: len(t)]]
    f_tp = f_all[:, inverse[len(t) :]]

    # alpha2: sum_eta n_eta F_eta(t) conj(F_eta(t'));  alpha1: (n+1) with conj swapped
    term_n = (f_t.T * n_orig) @ f_tp.conj()
    term_n1 = (f_t.conj().T * (n_orig + 1.0)) @ f_tp
    values = _combine_parts(term_n1, term_n, part)
    max_sep = float(np.max(np.abs(t[:, None] - tp[None, :]), initial=0.0))
    return BCFGrid(
        t_grid=t,
        tprime_grid=tp,
        values=values,
        kind=KIND_FACTORIZING,
        part=part,
        beyond_horizon=_horizon_flag(bath, max_sep),
    )


def bcf_factorizing_pairs(
    eig: EigenSystem,
    bath: DiscretizedBath,
    pm: PseudomodeConfig,
    th: ThermalParams,
    t_values,
    tprime_values,
    part: str = PART_FULL,
) -> np.ndarray:
    """Factorizing BCF along a list of (t, t') pairs instead of a product grid.

    Used by the spectral pipeline, which walks the anti-diagonal
    (t_cm + tau/2, t_cm - tau/2) and would waste an O(n^2) grid.
    """
    _check_eig_matches(eig, bath)
    t = np.atleast_1d(np.asarray(t_values, dtype=float))
    tp = np.atleast_1d(np.asarray(tprime_values, dtype=float))
    if t.shape != tp.shape:
        raise ValueError("t_values and tprime_values must have matching shapes")
    n_orig = _factorizing_occupations(pm, bath, th)

    t_all, inverse = np.unique(np.concatenate([t, tp]), return_inverse=True)
    f_all = _mode_amplitudes(eig, t_all)
    f_t = f_all[:, inverse[: len(t)]]
    f_tp = f_all[:, inverse[len(t) :]]

    term_n = np.einsum("ek,ek->k", f_t * n_orig[:, None], f_tp.conj())
    term_n1 = np.einsum("ek,ek->k", f_t.conj() * (n_orig[:, None] + 1.0), f_tp)
    return _combine_parts(term_n1, term_n, part)


def bcf_diagonal(
    eig: EigenSystem,
    pm: PseudomodeConfig,
    th: ThermalParams,
    tau_grid,
    part: str = PART_FULL,
    bath: DiscretizedBath | None = None,
) -> BCFGrid:
    """Transformed BCF for the global thermal (diagonal) initial state.

    alpha(tau) = sum_mu |S[0, mu]|^2 [ (n(w_mu)+1) e^{-i w_mu tau}
                                       + n(w_mu) e^{+i w_mu tau} ],
    manifestly a function of the time difference only.  Passing the bath lets
    the recurrence horizon be checked against the tau grid.
    """
    if part not in _PARTS:
        raise ValueError(f"unknown part {part!r}")
    tau = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    weight = np.abs(eig.transform[0]) ** 2
    n = _occupations(eig.frequencies, th)
    w_plus = weight * (n + 1.0) if part != PART_ALPHA2 else np.zeros_like(weight)
    w_minus = weight * n if part != PART_ALPHA1 else np.zeros_like(weight)
    values = _phase_weighted_sum(eig.frequencies, w_plus, w_minus, tau)
    return BCFGrid(
        t_grid=tau,
        tprime_grid=np.zeros(1),
        values=values[:, None],
        kind=KIND_DIAGONAL,
        part=part,
        beyond_horizon=_horizon_flag(bath, float(np.max(np.abs(tau), initial=0.0))),
    )


def bcf_components(
    eig: EigenSystem,
    bath: DiscretizedBath,
    pm: PseudomodeConfig,
    th: ThermalParams,
    t_grid,
    tprime_grid=None,
    *,
    kind: str,
    part: str,
) -> BCFGrid:
    """Dispatch to the factorizing or diagonal BCF with explicit part selection.

    For the diagonal kind, ``t_grid`` is interpreted as the tau grid and
    ``tprime_grid`` must be omitted or ``[0]``.
    """
    if kind == KIND_FACTORIZING:
        if tprime_grid is None:
            raise ValueError("factorizing BCF needs an explicit tprime_grid")
        return bcf_factorizing(eig, bath, pm, th, t_grid, tprime_grid, part=part)
    if kind == KIND_DIAGONAL:
        if tprime_grid is not None and np.any(np.asarray(tprime_grid) != 0):
            raise ValueError("diagonal BCF is stationary; pass the tau grid only")
        return bcf_diagonal(eig, pm, th, t_grid, part=part, bath=bath)
    raise ValueError(f"component selection is defined for transformed kinds, not {kind!r}")

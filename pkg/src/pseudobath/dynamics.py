"""Second-moment propagation of the system+pseudomode+bath quadratic Hamiltonian.

The bilinear, excitation-conserving Hamiltonian evolves annihilation operators
linearly, a(t) = P(t) a(0) with P(t) = W e^{-iEt} W^dagger from the full
eigendecomposition.  Covariances C_jk = <a_j^dagger a_k> therefore evolve by
congruence, and the two observables of interest, n_sys(t) = C_00(t) and
n_pm(t) = C_11(t), need only rows 0 and 1 of P(t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .baths import DiscretizedBath, PseudomodeConfig, ThermalParams, mean_occupation
from .bcf import KIND_DIAGONAL, KIND_FACTORIZING
from .linalg import EigenSystem

__all__ = [
    "CovarianceMatrix",
    "OccupationTrajectory",
    "initial_covariance",
    "propagate_occupations",
    "covariance_at",
    "total_energy",
    "total_number",
]

_BLOCK = 512


@dataclass(frozen=True)
class CovarianceMatrix:
    """Second moments <a_j^dagger a_k> with slot 0 = system, 1 = PM, 2.. = bath."""

    matrix: np.ndarray
    kind: str

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("covariance must be a square matrix")
        scale = max(float(np.max(np.abs(m))), 1.0)
        if float(np.max(np.abs(m - m.conj().T))) > 1e-10 * scale:
            raise ValueError("covariance must be Hermitian")
        diag = np.diagonal(m)
        if np.any(diag.real < -1e-10 * scale) or np.any(np.abs(diag.imag) > 1e-10 * scale):
            raise ValueError("covariance diagonal must be real and non-negative")
        object.__setattr__(self, "matrix", m)
        m.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def occupation(self, slot: int) -> float:
        return float(self.matrix[slot, slot].real)


@dataclass(frozen=True)
class OccupationTrajectory:
    """n_sys(t) and n_pm(t) for one initial-state kind."""

    t_grid: np.ndarray
    n_sys: np.ndarray
    n_pm: np.ndarray
    kind: str
    beyond_horizon: bool = False

    def __post_init__(self) -> None:
        t = np.atleast_1d(np.asarray(self.t_grid, dtype=float))
        ns = np.atleast_1d(np.asarray(self.n_sys, dtype=float))
        npm = np.atleast_1d(np.asarray(self.n_pm, dtype=float))
        if not (t.shape == ns.shape == npm.shape):
            raise ValueError("trajectory arrays must have matching shapes")
        for name, arr in (("t_grid", t), ("n_sys", ns), ("n_pm", npm)):
            object.__setattr__(self, name, arr)
            arr.setflags(write=False)


def initial_covariance(
    kind: str,
    omega_sys: float,
    pm: PseudomodeConfig,
    bath: DiscretizedBath,
    eig: EigenSystem,
    th: ThermalParams,
) -> CovarianceMatrix:
    """Initial second moments for the chosen environment state; system in vacuum.

    Factorizing: PM and every bath oscillator carry their bare thermal
    occupations, no cross correlations.  Diagonal: the joint PM+bath
    environment is thermal in its eigenbasis, so the environment block is the
    congruence conj(S) diag(n(w_mu)) S^T, which correlates PM and bath.

    ``eig`` must be the PM+bath eigensystem (dimension N+1); ``omega_sys``
    only labels the system slot, whose vacuum moments vanish either way.
    """
    if eig.dim != bath.n_modes + 1:
        raise ValueError("eig must decompose the PM+bath matrix (dimension N+1)")
    dim = bath.n_modes + 2
    if kind == KIND_FACTORIZING:
        occ = np.concatenate(
            (
                [0.0, mean_occupation(pm.omega_pm, th)],
                np.asarray(mean_occupation(bath.frequencies, th), dtype=float),
            )
        )
        matrix = np.diag(occ)
    elif kind == KIND_DIAGONAL:
        n_eig = np.asarray(mean_occupation(eig.frequencies, th), dtype=float)
        s = eig.transform
        env = (s.conj() * n_eig) @ s.T
        matrix = np.zeros((dim, dim), dtype=env.dtype)
        matrix[1:, 1:] = env
    else:
        raise ValueError(f"unknown initial-state kind {kind!r}")
    return CovarianceMatrix(matrix=matrix, kind=kind)


def _matmul_mixed(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a @ b where a may be complex and b real, without upcasting a copy of b.

    The re/im parts are copied contiguously first: numpy only routes the
    product through BLAS for contiguous operands, and ``a.real`` is a strided
    view.
    """
    if np.iscomplexobj(b) or not np.iscomplexobj(a):
        return a @ b
    real_part = np.ascontiguousarray(a.real) @ b
    imag_part = np.ascontiguousarray(a.imag) @ b
    return real_part + 1j * imag_part


def _propagator_rows(
    eig: EigenSystem, slot: int, t_values: np.ndarray
) -> np.ndarray:
    """Rows P(t)[slot, :] for every requested time, shape (nt, dim)."""
    w = eig.transform
    phases = np.exp(-1j * np.outer(t_values, eig.frequencies)) * w[slot, :]
    return _matmul_mixed(phases, w.conj().T if np.iscomplexobj(w) else w.T)


def propagate_occupations(
    full_eig: EigenSystem,
    c0: CovarianceMatrix,
    t_grid,
    recurrence_horizon: float | None = None,
) -> OccupationTrajectory:
    """Occupation trajectories n_sys(t), n_pm(t) from the full eigendecomposition.

    Per observable and time this contracts one propagator row against the
    initial covariance; the full evolved matrix is never formed.  t = 0 entries
    are read off the initial covariance directly (the propagator is exactly
    the identity there).
    """
    if full_eig.dim != c0.dim:
        raise ValueError("eigensystem and covariance dimensions differ")
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    c0m = c0.matrix
    results = []
    for slot in (0, 1):
        values = np.empty(len(t))
        nonzero = np.flatnonzero(t != 0.0)
        values[t == 0.0] = c0m[slot, slot].real
        for lo in range(0, len(nonzero), _BLOCK):
            sel = nonzero[lo : lo + _BLOCK]
            rows = _propagator_rows(full_eig, slot, t[sel])
            contracted = _matmul_mixed(rows, c0m.T)
            values[sel] = np.einsum("tl,tl->t", rows.conj(), contracted).real
        results.append(values)
    beyond = recurrence_horizon is not None and float(np.max(t)) > recurrence_horizon
    return OccupationTrajectory(
        t_grid=t, n_sys=results[0], n_pm=results[1], kind=c0.kind, beyond_horizon=beyond
    )


def covariance_at(full_eig: EigenSystem, c0: CovarianceMatrix, t: float) -> CovarianceMatrix:
    """Full evolved covariance C(t); O(dim^3), intended for conservation checks."""
    w = full_eig.transform
    phases = np.exp(-1j * full_eig.frequencies * t)
    p = _matmul_mixed((w * phases), w.conj().T if np.iscomplexobj(w) else w.T)
    evolved = _matmul_mixed(p.conj(), np.asarray(c0.matrix)) @ p.T
    # symmetrize away the roundoff skew before the constructor's Hermiticity check
    evolved = 0.5 * (evolved + evolved.conj().T)
    return CovarianceMatrix(matrix=evolved, kind=c0.kind)


def total_energy(h_matrix: np.ndarray, cov: CovarianceMatrix) -> float:
    """<H> = sum_jk H_jk <a_j^dagger a_k>, conserved under the evolution."""
    return float(np.sum(h_matrix * cov.matrix).real)


def total_number(cov: CovarianceMatrix) -> float:
    """Total excitation number, conserved by the excitation-preserving coupling."""
    return float(np.trace(cov.matrix).real)

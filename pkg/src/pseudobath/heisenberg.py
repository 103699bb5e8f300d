"""Heisenberg-picture propagator of the pseudomode and BCFs derived from it.

The pseudomode amplitude U(t) solves the integro-differential equation

    dU/dt = -i Omega U(t) - int_0^t K(t - s) U(s) ds,   U(0) = 1,

with the memory kernel K(tau) = sum_k kappa_k^2 e^{-i w_k tau}.  Two solvers
are provided: an exact auxiliary-mode embedding (eigendecomposition of an
arrowhead matrix with +/- i couplings) and an explicit 4th-order integrator of
the equivalent local system, which serve as mutual cross-checks.  From a
tabulated U(t), the transformed BCFs are reassembled by quadrature; these
routes are independent of the eigenbasis formulas in :mod:`pseudobath.bcf` and
are used as oracles against them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .baths import DiscretizedBath, PseudomodeConfig, ThermalParams, mean_occupation
from .bcf import KIND_DIAGONAL, KIND_FACTORIZING, BCFGrid
from .linalg import EigenSystem, eig_hermitian

__all__ = [
    "PropagatorTable",
    "memory_kernel",
    "build_propagator_matrix",
    "propagator_embedding",
    "propagator_direct",
    "uniform_time_grid",
    "bcf_factorizing_via_u",
    "bcf_diagonal_via_u",
]

METHOD_EMBEDDING = "embedding"
METHOD_DIRECT = "direct-integration"

_GRID_ATOL = 1e-9
_CONTRACTIVITY_TOL = 1e-8


@dataclass(frozen=True)
class PropagatorTable:
    """Samples of the pseudomode propagator U(t) on a time grid.

    For the positive-spectrum baths treated here the kernel is dissipative, so
    |U(t)| never exceeds 1 (up to roundoff); the constructor enforces this and
    U(0) = 1 whenever t = 0 is part of the grid.
    """

    t_grid: np.ndarray
    u_values: np.ndarray
    method: str
    embed_eig: EigenSystem | None = None

    def __post_init__(self) -> None:
        t = np.atleast_1d(np.asarray(self.t_grid, dtype=float))
        u = np.atleast_1d(np.asarray(self.u_values, dtype=complex))
        if t.shape != u.shape:
            raise ValueError("t_grid and u_values must have matching shapes")
        if np.any(t < 0):
            raise ValueError("the propagator is defined for t >= 0 only")
        if np.any(np.abs(u) > 1.0 + _CONTRACTIVITY_TOL):
            raise ValueError(
                f"|U| exceeds 1 by more than {_CONTRACTIVITY_TOL:.0e}; "
                "propagator table is inconsistent with a dissipative kernel"
            )
        at_zero = np.flatnonzero(t == 0.0)
        if at_zero.size and np.max(np.abs(u[at_zero] - 1.0)) > 1e-12:
            raise ValueError("U(0) must equal 1")
        object.__setattr__(self, "t_grid", t)
        object.__setattr__(self, "u_values", u)
        t.setflags(write=False)
        u.setflags(write=False)

    def uniform_step(self) -> float:
        """Grid step, raising unless the grid is uniform starting at 0."""
        if len(self.t_grid) < 2 or self.t_grid[0] != 0.0:
            raise ValueError("propagator grid must start at t = 0 with >= 2 samples")
        steps = np.diff(self.t_grid)
        h = float(steps[0])
        if np.max(np.abs(steps - h)) > _GRID_ATOL:
            raise ValueError("propagator grid is not uniform")
        return h


def uniform_time_grid(t_max: float, step: float) -> np.ndarray:
    """Uniform grid 0, step, ..., covering [0, t_max]."""
    if step <= 0 or t_max < 0:
        raise ValueError("need step > 0 and t_max >= 0")
    n = int(round(t_max / step))
    if n * step < t_max - _GRID_ATOL:
        n += 1
    return np.arange(n + 1) * step


def memory_kernel(bath: DiscretizedBath, tau_grid) -> np.ndarray:
    """K(tau) = sum_k kappa_k^2 e^{-i w_k tau} (analytic extension for tau < 0)."""
    tau = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    k2 = bath.couplings.astype(float) ** 2
    return k2 @ np.exp(-1j * np.outer(bath.frequencies, tau))


def build_propagator_matrix(pm: PseudomodeConfig, bath: DiscretizedBath) -> np.ndarray:
    """Hermitian generator of the embedded local system for U(t).

    Same arrowhead sparsity as the PM+bath coupling matrix but with first row
    -i kappa^* and first column +i kappa; the two matrices are unitarily
    related by a diagonal phase transform and share their spectrum.
    """
    n = bath.n_modes
    g = np.zeros((n + 1, n + 1), dtype=complex)
    g[0, 0] = pm.omega_pm
    kappa = np.asarray(bath.couplings, dtype=complex)
    g[0, 1:] = -1j * kappa.conj()
    g[1:, 0] = 1j * kappa
    g[np.arange(1, n + 1), np.arange(1, n + 1)] = bath.frequencies
    return g


def propagator_embedding(
    pm: PseudomodeConfig, bath: DiscretizedBath, t_grid
) -> PropagatorTable:
    """U(t) from the auxiliary-mode embedding: U(t) = sum_mu |T[0, mu]|^2 e^{-i w_mu t}.

    Exact up to the eigendecomposition, hence valid at arbitrary times.
    """
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    eig = eig_hermitian(build_propagator_matrix(pm, bath))
    weights = np.abs(eig.transform[0]) ** 2
    u = weights @ np.exp(-1j * np.outer(eig.frequencies, t))
    return PropagatorTable(t_grid=t, u_values=u, method=METHOD_EMBEDDING, embed_eig=eig)


def propagator_direct(
    pm: PseudomodeConfig, bath: DiscretizedBath, t_grid, dt: float
) -> PropagatorTable:
    """U(t) by classic 4th-order Runge-Kutta on the embedded local system.

    The requested times must lie on the integration grid.  The step must
    resolve the fastest mode: dt * max(omega) <= 0.1.
    """
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    omega_max = max(float(np.max(bath.frequencies)), pm.omega_pm)
    if dt <= 0 or dt * omega_max > 0.1:
        raise ValueError(
            f"dt = {dt} does not resolve the fastest mode "
            f"(need dt * {omega_max:.3g} <= 0.1)"
        )
    steps = np.round(t / dt).astype(int)
    if np.max(np.abs(steps * dt - t)) > _GRID_ATOL:
        raise ValueError("all requested times must be integer multiples of dt")

    omega = bath.frequencies
    kappa = bath.couplings.astype(complex)
    kappa_c = kappa.conj()

    def rhs(u: np.ndarray) -> np.ndarray:
        out = np.empty_like(u)
        out[0] = -1j * (pm.omega_pm * u[0] + (-1j) * np.dot(kappa_c, u[1:]))
        out[1:] = -1j * (1j * kappa * u[0] + omega * u[1:])
        return out

    capture = {}
    order = np.argsort(steps)
    u = np.zeros(bath.n_modes + 1, dtype=complex)
    u[0] = 1.0
    k_now = 0
    for idx in order:
        target = steps[idx]
        while k_now < target:
            k1 = rhs(u)
            k2 = rhs(u + 0.5 * dt * k1)
            k3 = rhs(u + 0.5 * dt * k2)
            k4 = rhs(u + dt * k3)
            u = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            k_now += 1
        capture[target] = u[0]
    values = np.array([capture[s] for s in steps])
    return PropagatorTable(t_grid=t, u_values=values, method=METHOD_DIRECT)


# --- BCFs reassembled from U(t) ----------------------------------------------


def _quadrature_view(prop: PropagatorTable, ds: float) -> tuple[np.ndarray, np.ndarray]:
    """Sub-sample the propagator table to the quadrature step ds."""
    h = prop.uniform_step()
    stride = int(round(ds / h))
    if stride < 1 or abs(stride * h - ds) > _GRID_ATOL:
        raise ValueError(
            f"quadrature step ds = {ds} is not an integer multiple of the "
            f"propagator sampling step {h} (U would be undersampled)"
        )
    return prop.t_grid[::stride], prop.u_values[::stride]


def _grid_indices(values: np.ndarray, step: float, n_nodes: int, label: str) -> np.ndarray:
    idx = np.round(values / step).astype(int)
    if np.max(np.abs(idx * step - values)) > _GRID_ATOL:
        raise ValueError(f"{label} must lie on the quadrature grid (step {step})")
    if np.any(idx < 0) or np.any(idx >= n_nodes):
        raise ValueError(f"{label} exceeds the range covered by the propagator table")
    return idx


def _history_integrals(
    omega: np.ndarray, s_grid: np.ndarray, u_s: np.ndarray, ds: float
) -> np.ndarray:
    """I_k(t) = int_0^t U(t-s) e^{-i w_k s} ds on the quadrature grid.

    Substituting s -> t - s turns the integral into e^{-i w_k t} times a running
    integral of U(s) e^{+i w_k s}, so one cumulative pass per mode covers every
    requested time.
    """
    phases = np.exp(1j * np.outer(omega, s_grid))
    running = cumulative_trapezoid(u_s[None, :] * phases, dx=ds, axis=1, initial=0.0)
    return phases.conj() * running


def bcf_factorizing_via_u(
    prop: PropagatorTable,
    bath: DiscretizedBath,
    pm: PseudomodeConfig,
    th: ThermalParams,
    t_grid,
    tprime_grid,
    ds: float,
) -> BCFGrid:
    """Factorizing-state BCF from the propagator route, per |g|^2.

    alpha(t,t') = U(t)U*(t')(n(Omega)+1) + U*(t)U(t')n(Omega)
                  + sum_k kappa_k^2 [ (n(w_k)+1) I_k(t) I_k*(t')
                                      + n(w_k) I_k*(t) I_k(t') ],

    where the history integrals I_k collapse the double time integral over the
    bath modes; a literal 2-D quadrature is never performed.
    """
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    tp = np.atleast_1d(np.asarray(tprime_grid, dtype=float))
    s_grid, u_s = _quadrature_view(prop, ds)
    it = _grid_indices(t, ds, len(s_grid), "t_grid")
    itp = _grid_indices(tp, ds, len(s_grid), "tprime_grid")

    hist = _history_integrals(bath.frequencies, s_grid, u_s, ds)
    i_t = hist[:, it]
    i_tp = hist[:, itp]
    k2 = bath.couplings.astype(float) ** 2
    n_bath = np.asarray(mean_occupation(bath.frequencies, th), dtype=float)
    n_pm = float(mean_occupation(pm.omega_pm, th))

    u_t = u_s[it]
    u_tp = u_s[itp]
    values = (n_pm + 1.0) * np.outer(u_t, u_tp.conj())
    values += n_pm * np.outer(u_t.conj(), u_tp)
    values += (i_t.T * (k2 * (n_bath + 1.0))) @ i_tp.conj()
    values += (i_t.conj().T * (k2 * n_bath)) @ i_tp
    return BCFGrid(
        t_grid=t,
        tprime_grid=tp,
        values=values,
        kind=KIND_FACTORIZING,
        method="heisenberg",
        beyond_horizon=float(np.max(np.abs(t[:, None] - tp[None, :]), initial=0.0))
        > bath.recurrence_horizon,
    )


def bcf_diagonal_via_u(
    prop: PropagatorTable,
    eig: EigenSystem,
    bath: DiscretizedBath,
    pm: PseudomodeConfig,
    th: ThermalParams,
    t_grid,
    tprime_grid,
    ds: float,
) -> BCFGrid:
    """Diagonal-state BCF from the propagator route, per |g|^2.

    Evaluates the four term groups of the eigenbasis-transformed Heisenberg
    solution: the bare propagator products weighted by |S[0, mu]|^2, the double
    time integrals contracted through V_mu(t) = sum_k kappa_k^* S[k, mu] I_k(t),
    and the two mixed single-integral groups carrying +/- i prefactors.
    """
    if eig.dim != bath.n_modes + 1:
        raise ValueError("eigensystem does not match the bath dimension")
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    tp = np.atleast_1d(np.asarray(tprime_grid, dtype=float))
    s_grid, u_s = _quadrature_view(prop, ds)
    it = _grid_indices(t, ds, len(s_grid), "t_grid")
    itp = _grid_indices(tp, ds, len(s_grid), "tprime_grid")

    hist = _history_integrals(bath.frequencies, s_grid, u_s, ds)
    kappa = bath.couplings.astype(complex)
    s_bath = eig.transform[1:, :]
    # V[mu, j] = sum_k kappa_k^* S[k, mu] I_k(t_j), evaluated at t and t' nodes
    v_t = s_bath.T @ (kappa.conj()[:, None] * hist[:, it])
    v_tp = s_bath.T @ (kappa.conj()[:, None] * hist[:, itp])

    s0 = eig.transform[0, :].astype(complex)
    n_eig = np.asarray(mean_occupation(eig.frequencies, th), dtype=float)
    w0 = np.abs(s0) ** 2
    u_t = u_s[it]
    u_tp = u_s[itp]

    a_plus = float(np.sum(w0 * (n_eig + 1.0)))
    a_minus = float(np.sum(w0 * n_eig))
    values = a_plus * np.outer(u_t, u_tp.conj()) + a_minus * np.outer(u_t.conj(), u_tp)

    values += (v_t.T * (n_eig + 1.0)) @ v_tp.conj()
    values += (v_t.conj().T * n_eig) @ v_tp

    p_plus_tp = (s0 * (n_eig + 1.0)) @ v_tp.conj()
    p_minus_t = (s0 * n_eig) @ v_t.conj()
    values += 1j * (np.outer(u_t, p_plus_tp) + np.outer(p_minus_t, u_tp))

    q_plus_t = (s0.conj() * (n_eig + 1.0)) @ v_t
    q_minus_tp = (s0.conj() * n_eig) @ v_tp
    values += -1j * (np.outer(q_plus_t, u_tp.conj()) + np.outer(u_t.conj(), q_minus_tp))

    return BCFGrid(
        t_grid=t,
        tprime_grid=tp,
        values=values,
        kind=KIND_DIAGONAL,
        method="heisenberg",
        beyond_horizon=float(np.max(np.abs(t[:, None] - tp[None, :]), initial=0.0))
        > bath.recurrence_horizon,
    )

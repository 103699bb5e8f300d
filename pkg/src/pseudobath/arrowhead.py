"""Specialized O(N^2) eigensolver for Hermitian arrowhead matrices.

The pseudomode coupling matrices are arrowheads: nonzero entries sit only on
the diagonal and in the first row/column.  Their eigenvalues are the roots of
the secular equation

    f(lam) = a0 - lam + sum_j rho_j^2 / (lam - d_j) = 0,

which interlace the shaft diagonal d.  Each root is located by bisection plus
safeguarded Newton polishing in coordinates shifted to its nearest pole, and
the coupling weights are then recomputed from the computed spectrum
(inverse-eigenvalue identity) so that the assembled eigenvectors stay
numerically orthogonal even when roots hug their poles.

This is an optional fast path; the dense solver in :mod:`pseudobath.linalg`
remains the reference implementation and the two are cross-validated in the
test suite.
"""

from __future__ import annotations

import numpy as np

from .linalg import EigenSystem, _check_hermitian, _fix_phases

__all__ = ["eig_arrowhead", "arrowhead_eigh"]

_BISECT_ITERS = 64
_NEWTON_ITERS = 40
# work arrays are bounded to ~_CHUNK_ELEMS floats regardless of matrix size
_CHUNK_ELEMS = 4_000_000


def _root_chunk(
    a0: float,
    d: np.ndarray,
    rho_sq: np.ndarray,
    sigma: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
) -> np.ndarray:
    """Solve g(delta) = f(sigma + delta) = 0 for one chunk of roots.

    g(delta) = (a0 - sigma) - delta + sum_j rho_j^2 / (delta - (d_j - sigma)),
    strictly decreasing between its poles, with a verified bracket [lo, hi].
    """
    offsets = d[None, :] - sigma[:, None]
    base = a0 - sigma

    def g_and_slope(delta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        diff = delta[:, None] - offsets
        terms = rho_sq[None, :] / diff
        return base - delta + terms.sum(axis=1), -1.0 - (terms / diff).sum(axis=1)

    lo = lo.copy()
    hi = hi.copy()
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        g_mid, _ = g_and_slope(mid)
        above = g_mid > 0  # root lies above mid
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)

    delta = 0.5 * (lo + hi)
    eps = np.finfo(float).eps
    for _ in range(_NEWTON_ITERS):
        g, gp = g_and_slope(delta)
        above = g > 0
        lo = np.where(above, delta, lo)
        hi = np.where(above, hi, delta)
        new = delta - g / gp
        inside = (new > lo) & (new < hi)
        new = np.where(inside, new, 0.5 * (lo + hi))
        if np.all(np.abs(new - delta) <= 4 * eps * np.maximum(np.abs(new), 1e-300)):
            delta = new
            break
        delta = new
    return delta


def _secular_roots(
    a0: float, d: np.ndarray, rho: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All n+1 secular roots for strictly increasing d and positive rho.

    Returns (lam, shift_idx, delta) with lam = d[shift_idx] + delta; the offset
    delta carries full relative precision even for roots crowding a pole.
    """
    n = len(d)
    rho_sq = rho**2
    spread = float(np.linalg.norm(rho))
    chunk = max(1, _CHUNK_ELEMS // max(n, 1))

    shift_idx = np.empty(n + 1, dtype=int)
    delta_lo = np.empty(n + 1)
    delta_hi = np.empty(n + 1)

    shift_idx[0] = 0
    delta_lo[0] = (min(a0, d[0]) - spread) - d[0]
    delta_hi[0] = 0.0
    shift_idx[n] = n - 1
    delta_lo[n] = 0.0
    delta_hi[n] = (max(a0, d[-1]) + spread) - d[n - 1]

    if n > 1:
        mids = 0.5 * (d[:-1] + d[1:])
        f_mid = np.empty(n - 1)
        for s in range(0, n - 1, chunk):
            block = mids[s : s + chunk]
            f_mid[s : s + chunk] = (
                a0 - block + (rho_sq[None, :] / (block[:, None] - d[None, :])).sum(axis=1)
            )
        upper = f_mid > 0  # root sits in the upper half, shift to the upper pole
        r = np.arange(1, n)
        shift_idx[r] = np.where(upper, r, r - 1)
        delta_lo[r] = np.where(upper, mids - d[r], 0.0)
        delta_hi[r] = np.where(upper, 0.0, mids - d[r - 1])

    delta = np.empty(n + 1)
    for s in range(0, n + 1, chunk):
        sl = slice(s, min(s + chunk, n + 1))
        delta[sl] = _root_chunk(
            a0, d, rho_sq, d[shift_idx[sl]], delta_lo[sl], delta_hi[sl]
        )
    return d[shift_idx] + delta, shift_idx, delta


def _recomputed_weights(
    d: np.ndarray, lam: np.ndarray, shift_idx: np.ndarray, delta: np.ndarray
) -> np.ndarray:
    """Coupling weights consistent with the computed spectrum.

    rho_hat_j^2 = prod_k |d_j - lam_k| / prod_{k != j} |d_j - d_k| in log space;
    pole-adjacent factors use the stored shift offsets exactly.
    """
    n = len(d)
    chunk = max(1, _CHUNK_ELEMS // (n + 1))
    log_rho = np.empty(n)
    for s in range(0, n, chunk):
        sl = slice(s, min(s + chunk, n))
        diff_lam = d[sl, None] - lam[None, :]
        local = shift_idx - s
        hit = (local >= 0) & (local < sl.stop - s)
        diff_lam[local[hit], np.flatnonzero(hit)] = -delta[hit]
        log_num = np.sum(np.log(np.abs(diff_lam)), axis=1)

        diff_d = d[sl, None] - d[None, :]
        diff_d[np.arange(sl.stop - s), np.arange(s, sl.stop)] = 1.0
        log_den = np.sum(np.log(np.abs(diff_d)), axis=1)
        log_rho[sl] = 0.5 * (log_num - log_den)
    return np.exp(log_rho)


def _canonical_arrowhead(
    a0: float, d: np.ndarray, rho: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Eigensystem of [[a0, rho^T], [rho, diag(d)]] with d increasing, rho > 0."""
    n = len(d)
    lam, shift_idx, delta = _secular_roots(a0, d, rho)
    rho_hat = _recomputed_weights(d, lam, shift_idx, delta)

    lam_minus_d = lam[None, :] - d[:, None]
    lam_minus_d[shift_idx, np.arange(n + 1)] = delta
    tail = rho_hat[:, None] / lam_minus_d
    vectors = np.empty((n + 1, n + 1))
    vectors[0, :] = 1.0
    vectors[1:, :] = tail
    vectors /= np.sqrt(1.0 + np.sum(tail**2, axis=0))
    return lam, vectors


def arrowhead_eigh(a0: float, d, kappa) -> EigenSystem:
    """Eigendecomposition from arrowhead data: tip a0, shaft d, couplings kappa.

    Handles complex couplings by a diagonal phase rotation, deflates
    (numerically) vanishing couplings, and concentrates duplicate shaft entries
    onto a single slot by Householder reflections before the secular solve.
    """
    d = np.asarray(d, dtype=float)
    kappa = np.asarray(kappa, dtype=complex)
    n = len(d)
    if kappa.shape != (n,):
        raise ValueError("couplings and shaft diagonal must have equal length")
    if n == 0:
        return EigenSystem(frequencies=np.array([float(a0)]), transform=np.eye(1))

    scale = max(abs(a0), float(np.max(np.abs(d))), float(np.max(np.abs(kappa))), 1e-300)

    rho = np.abs(kappa)
    phases = np.ones(n, dtype=complex)
    nonzero = rho > 0
    phases[nonzero] = kappa[nonzero] / rho[nonzero]

    order = np.argsort(d, kind="stable")
    d_sorted = d[order]
    rho_sorted = rho[order]

    # concentrate couplings of exactly-duplicate shaft entries onto one slot
    reflectors: list[tuple[np.ndarray, np.ndarray]] = []
    starts = np.flatnonzero(np.concatenate(([True], np.diff(d_sorted) > 0)))
    for lo, hi in zip(starts, np.concatenate((starts[1:], [n]))):
        if hi - lo < 2:
            continue
        block = rho_sorted[lo:hi]
        norm = float(np.linalg.norm(block))
        if norm == 0.0:
            continue
        u = block.copy()
        u[0] -= norm
        u_norm = float(np.linalg.norm(u))
        if u_norm > 0:
            reflectors.append((np.arange(lo, hi), u / u_norm))
        rho_sorted[lo:hi] = 0.0
        rho_sorted[lo] = norm

    keep = rho_sorted > n * np.finfo(float).eps * scale
    d_kept = d_sorted[keep]
    rho_kept = rho_sorted[keep]

    dim = n + 1
    if len(d_kept) == 0:
        lam_all = np.concatenate(([float(a0)], d_sorted))
        vec_all = np.eye(dim)
    else:
        lam, vec = _canonical_arrowhead(float(a0), d_kept, rho_kept)
        lam_all = np.concatenate((lam, d_sorted[~keep]))
        vec_all = np.zeros((dim, dim))
        kept_slots = np.concatenate(([True], keep))
        vec_all[np.ix_(kept_slots, np.arange(len(lam)))] = vec
        dropped = np.flatnonzero(~keep) + 1
        vec_all[dropped, len(lam) + np.arange(len(dropped))] = 1.0

    # undo the reductions: Householder blocks, shaft permutation, phase rotation
    for idx, u in reflectors:
        rows = vec_all[idx + 1, :]
        vec_all[idx + 1, :] = rows - 2.0 * np.outer(u, u @ rows)
    unsort = np.empty(n, dtype=int)
    unsort[order] = np.arange(n)
    vec_all[1:, :] = vec_all[1:, :][unsort, :]

    if np.any(phases.imag):
        vec_full = vec_all.astype(complex)
        vec_full[1:, :] *= phases[:, None]
    else:
        vec_full = vec_all
        vec_full[1:, :] *= phases.real[:, None]

    ascending = np.argsort(lam_all, kind="stable")
    return EigenSystem(
        frequencies=lam_all[ascending], transform=_fix_phases(vec_full[:, ascending])
    )


def eig_arrowhead(m: np.ndarray) -> EigenSystem:
    """Eigendecomposition of a dense matrix after verifying arrowhead sparsity."""
    m = np.asarray(m)
    _check_hermitian(m)
    n = m.shape[0] - 1
    if n < 0:
        raise ValueError("matrix must be at least 1x1")
    if n > 0:
        shaft = np.asarray(m[1:, 1:], dtype=complex).copy()
        np.fill_diagonal(shaft, 0.0)
        scale = max(float(np.max(np.abs(m))), 1e-300)
        if float(np.max(np.abs(shaft), initial=0.0)) > 1e-14 * scale:
            raise ValueError("matrix does not have arrowhead sparsity")
    return arrowhead_eigh(float(m[0, 0].real), np.diagonal(m)[1:].real, np.asarray(m[1:, 0]))

"""Hermitian coupling matrices of the pseudomode model and their eigendecomposition.

Index conventions: in the pseudomode+bath matrix, slot 0 is the pseudomode and
slots 1..N the bath oscillators.  In the full matrix, slot 0 is the system,
slot 1 the pseudomode, and slots 2..N+1 the bath.
"""

from __future__ import annotations

import hashlib
import os
import struct
from dataclasses import dataclass

import numpy as np

from .baths import DiscretizedBath, PseudomodeConfig

__all__ = [
    "EigenSystem",
    "build_pm_bath_matrix",
    "build_full_matrix",
    "eig_hermitian",
    "save_eigensystem",
    "load_eigensystem",
    "cached_eig_hermitian",
]

_HERMITICITY_RTOL = 1e-12


@dataclass(frozen=True)
class EigenSystem:
    """Eigendecomposition M = S diag(frequencies) S^dagger of a Hermitian matrix.

    ``frequencies`` are ascending, the columns of the unitary ``transform`` are
    the eigenvectors, and original mode operators map to eigenmode operators as
    a_j = sum_mu S[j, mu] c_mu.  The phase of each column is fixed so its
    largest-modulus component is real and positive, which makes the
    decomposition reproducible across runs.
    """

    frequencies: np.ndarray
    transform: np.ndarray

    def __post_init__(self) -> None:
        freqs = np.asarray(self.frequencies, dtype=float)
        s = np.asarray(self.transform)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError("transform must be a square matrix")
        if len(freqs) != s.shape[0]:
            raise ValueError("frequency/transform dimension mismatch")
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "transform", s)
        freqs.setflags(write=False)
        s.setflags(write=False)

    @property
    def dim(self) -> int:
        return len(self.frequencies)

    def unitarity_defect(self) -> float:
        s = self.transform
        eye = np.eye(self.dim)
        return float(np.max(np.abs(s.conj().T @ s - eye)))

    def reconstruction_defect(self, matrix: np.ndarray) -> float:
        s = self.transform
        rebuilt = (s * self.frequencies) @ s.conj().T
        scale = max(float(np.max(np.abs(matrix))), 1e-300)
        return float(np.max(np.abs(rebuilt - matrix))) / scale


def build_pm_bath_matrix(pm: PseudomodeConfig, bath: DiscretizedBath) -> np.ndarray:
    """Arrowhead matrix of the joint pseudomode+bath environment.

    Entry (0,0) holds the PM frequency, the first row the conjugated couplings,
    the first column the couplings, and the remaining diagonal the bath
    frequencies.  All other entries vanish.
    """
    n = bath.n_modes
    m = np.zeros((n + 1, n + 1), dtype=complex)
    m[0, 0] = pm.omega_pm
    kappa = np.asarray(bath.couplings, dtype=complex)
    m[0, 1:] = kappa.conj()
    m[1:, 0] = kappa
    m[np.arange(1, n + 1), np.arange(1, n + 1)] = bath.frequencies
    return m


def build_full_matrix(
    omega_sys: float, pm: PseudomodeConfig, bath: DiscretizedBath
) -> np.ndarray:
    """Coupling matrix of system + pseudomode + bath.

    The system (slot 0) couples only to the PM (slot 1) with strength g; the
    PM-bath block repeats :func:`build_pm_bath_matrix`.
    """
    n = bath.n_modes
    m = np.zeros((n + 2, n + 2), dtype=complex)
    m[0, 0] = omega_sys
    g = complex(pm.g)
    m[0, 1] = np.conj(g)
    m[1, 0] = g
    m[1:, 1:] = build_pm_bath_matrix(pm, bath)
    return m


def _check_hermitian(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(float(np.max(np.abs(m))), 1.0)
    defect = float(np.max(np.abs(m - m.conj().T)))
    if defect > _HERMITICITY_RTOL * scale:
        raise ValueError(
            f"matrix is not Hermitian: max|M - M^dagger| = {defect:.3e} "
            f"exceeds {_HERMITICITY_RTOL:.0e} * scale"
        )


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus component is real positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    mags = np.abs(pivots)
    mags[mags == 0] = 1.0
    return vectors * (pivots.conj() / mags)


def eig_hermitian(m: np.ndarray) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix with a deterministic phase gauge.

    Real-valued input is routed through the real-symmetric solver, which halves
    memory and runtime; the returned transform then stays real.

    Raises
    ------
    ValueError
        If the matrix is not Hermitian.
    np.linalg.LinAlgError
        If the underlying solver fails to converge (diagnostics attached).
    """
    m = np.asarray(m)
    _check_hermitian(m)
    work = m
    if np.iscomplexobj(m) and not np.any(m.imag):
        work = np.ascontiguousarray(m.real)
    try:
        freqs, vecs = np.linalg.eigh(work)
    except np.linalg.LinAlgError as err:
        raise np.linalg.LinAlgError(
            f"Hermitian eigensolver failed to converge on a "
            f"{m.shape[0]}x{m.shape[1]} matrix (max|entry| = {np.max(np.abs(m)):.3e}): {err}"
        ) from err
    return EigenSystem(frequencies=freqs, transform=_fix_phases(vecs))


# --- binary cache of eigendecompositions -------------------------------------
#
# File layout (all little-endian):
#   8 bytes   magic  b"PSBEIG01"
#   uint64    dim
#   uint64    flags  (bit 0: transform stored as complex, re/im interleaved)
#   dim float64                eigenfrequencies, ascending
#   dim*dim float64            transform, row-major  (real storage), or
#   dim*dim*2 float64          interleaved re,im     (complex storage)

_MAGIC = b"PSBEIG01"


def save_eigensystem(path: str | os.PathLike, eig: EigenSystem) -> None:
    """Dump an EigenSystem to the documented little-endian binary format."""
    s = eig.transform
    is_complex = bool(np.iscomplexobj(s) and np.any(s.imag))
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<QQ", eig.dim, 1 if is_complex else 0))
        fh.write(np.ascontiguousarray(eig.frequencies, dtype="<f8").tobytes())
        if is_complex:
            inter = np.empty((eig.dim, eig.dim, 2), dtype="<f8")
            inter[..., 0] = s.real
            inter[..., 1] = s.imag
            fh.write(inter.tobytes())
        else:
            fh.write(np.ascontiguousarray(s.real, dtype="<f8").tobytes())


def load_eigensystem(path: str | os.PathLike) -> EigenSystem:
    """Read an EigenSystem written by :func:`save_eigensystem`."""
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != _MAGIC:
            raise ValueError(f"{path}: not an eigensystem dump (bad magic {magic!r})")
        dim, flags = struct.unpack("<QQ", fh.read(16))
        freqs = np.frombuffer(fh.read(8 * dim), dtype="<f8").astype(float)
        if flags & 1:
            raw = np.frombuffer(fh.read(16 * dim * dim), dtype="<f8")
            raw = raw.reshape(dim, dim, 2)
            s = raw[..., 0] + 1j * raw[..., 1]
        else:
            s = np.frombuffer(fh.read(8 * dim * dim), dtype="<f8").reshape(dim, dim).astype(float)
    return EigenSystem(frequencies=freqs, transform=s)


def cached_eig_hermitian(m: np.ndarray, cache_dir: str | os.PathLike | None) -> EigenSystem:
    """Eigendecomposition with an on-disk cache keyed by the matrix content.

    With ``cache_dir`` unset this is plain :func:`eig_hermitian`.  Repeat CLI
    runs on large baths then skip the O(N^3) solve.
    """
    if cache_dir is None:
        return eig_hermitian(m)
    m = np.asarray(m)
    digest = hashlib.sha256()
    digest.update(str(m.shape).encode())
    digest.update(np.ascontiguousarray(m).tobytes())
    path = os.path.join(os.fspath(cache_dir), f"eig-{digest.hexdigest()[:32]}.bin")
    if os.path.exists(path):
        return load_eigensystem(path)
    eig = eig_hermitian(m)
    os.makedirs(os.fspath(cache_dir), exist_ok=True)
    tmp = path + ".tmp"
    save_eigensystem(tmp, eig)
    os.replace(tmp, path)
    return eig

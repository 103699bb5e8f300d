"""CSV and manifest writers shared by the CLI and the demo scripts.

Every data file starts with ``# key: value`` comment lines recording the
physical parameters and the manifest it belongs to, followed by a column
header.  Numbers are rendered with 17 significant digits so repeated runs of
the same scenario produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import Mapping

import numpy as np

from .bcf import BCFGrid
from .dynamics import OccupationTrajectory
from .spectral import FOURIER_CONVENTION, SpectralFunction


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _header_lines(fields: Mapping[str, object]) -> list[str]:
    lines = []
    for key, value in fields.items():
        if value is None:
            continue
        if isinstance(value, float):
            value = _fmt(value)
        lines.append(f"# {key}: {value}")
    return lines


def write_bcf_csv(
    path, grid: BCFGrid, params: Mapping[str, object] | None = None, manifest: str | None = None
) -> None:
    """Write alpha(t, t') samples as (t, t_prime, re_alpha, im_alpha) rows."""
    fields: dict[str, object] = {
        "kind": grid.kind,
        "part": grid.part,
        "method": grid.method,
        "per_g_squared": grid.per_g_squared,
        "beyond_horizon": grid.beyond_horizon,
    }
    if params:
        fields.update(params)
    fields["manifest"] = manifest
    lines = _header_lines(fields)
    lines.append("t,t_prime,re_alpha,im_alpha")
    for i, t in enumerate(grid.t_grid):
        for j, tp in enumerate(grid.tprime_grid):
            v = grid.values[i, j]
            lines.append(f"{_fmt(t)},{_fmt(tp)},{_fmt(v.real)},{_fmt(v.imag)}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def write_spectral_csv(
    path,
    sf: SpectralFunction,
    params: Mapping[str, object] | None = None,
    manifest: str | None = None,
    value_label: str = "J",
) -> None:
    """Write a spectral function as (omega, value) rows with convention metadata."""
    fields: dict[str, object] = {
        "convention": FOURIER_CONVENTION,
        "window_type": sf.window_type,
        "window": sf.window,
        "t_cm": sf.t_cm,
        "resolution": sf.resolution,
        "noise_floor": sf.noise_floor,
    }
    if params:
        fields.update(params)
    fields["manifest"] = manifest
    lines = _header_lines(fields)
    lines.append(f"omega,{value_label}")
    for w, v in zip(sf.omega_grid, sf.values):
        lines.append(f"{_fmt(w)},{_fmt(v)}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def write_dynamics_csv(
    path,
    traj: OccupationTrajectory,
    params: Mapping[str, object] | None = None,
    manifest: str | None = None,
) -> None:
    """Write occupation trajectories as (t, n_sys, n_pm) rows."""
    fields: dict[str, object] = {
        "kind": traj.kind,
        "beyond_horizon": traj.beyond_horizon,
    }
    if params:
        fields.update(params)
    fields["manifest"] = manifest
    lines = _header_lines(fields)
    lines.append("t,n_sys,n_pm")
    for t, ns, npm in zip(traj.t_grid, traj.n_sys, traj.n_pm):
        lines.append(f"{_fmt(t)},{_fmt(ns)},{_fmt(npm)}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def write_manifest(
    path,
    scenario: Mapping[str, object],
    outputs: list[str],
    recurrence_horizon: float,
    wall_time_s: float,
    library_version: str,
) -> None:
    """Run provenance: resolved parameters, horizon, version, wall time, outputs."""
    doc = {
        "manifest_version": 1,
        "library_version": library_version,
        "scenario": scenario,
        "recurrence_horizon": recurrence_horizon,
        "outputs": outputs,
        "wall_time_s": wall_time_s,
    }
    with open(path, "w", encoding="ascii") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_csv_columns(path) -> dict[str, np.ndarray]:
    """Read back a CSV written by this module (used by tests and demos)."""
    header: list[str] | None = None
    rows: list[list[float]] = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split(",")
            else:
                rows.append([float(tok) for tok in line.split(",")])
    if header is None:
        raise ValueError(f"{path}: no column header found")
    data = np.asarray(rows, dtype=float)
    return {name: data[:, k] for k, name in enumerate(header)}

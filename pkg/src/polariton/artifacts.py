"""Artifact serialization: spectrum grids, overlays, and run metadata.

All writers are atomic (temp file in the target directory, then rename)
and emit floats with 17 significant digits, enough to round-trip IEEE
doubles exactly; rerunning an identical configuration reproduces every
artifact byte for byte.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .model import GHZ_TO_ANGULAR, MHZ_TO_ANGULAR, DeviceParams
from .eigenmode import TransitionRow
from .spectroscopy import SpectrumGrid, SweepResult

GRID_SCHEMA = "polariton-grid/1"
GRID_HEADER = "drive_value,probe_GHz,n_tilde,converged"
OVERLAY_HEADER = "sweep_value,from,to,freq_GHz,matelem,intensity"
ANALYTIC_HEADER = "rabi_MHz,power_dBm,w13_GHz,w14_GHz,w23_GHz,w24_GHz"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write text to ``path`` via a temporary file and atomic rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    handle = tempfile.NamedTemporaryFile(
        mode="w", encoding="utf-8", newline="\n",
        dir=target.parent, prefix=target.name + ".", suffix=".tmp", delete=False,
    )
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, target)
    except BaseException:
        os.unlink(handle.name)
        raise


def write_grid_csv(path: str | Path, grid: SpectrumGrid, sweep_in_ghz: bool = False) -> None:
    """Grid rows in sweep-major order: drive_value, probe_GHz, n_tilde, converged."""
    scale = GHZ_TO_ANGULAR if sweep_in_ghz else 1.0
    lines = [GRID_HEADER]
    for i, sval in enumerate(grid.sweep_values):
        drive_value = sval / scale
        for j, probe in enumerate(grid.probe_freqs):
            lines.append(
                f"{_fmt(drive_value)},{_fmt(probe / GHZ_TO_ANGULAR)},"
                f"{_fmt(grid.values[i, j])},{int(grid.converged[i, j])}"
            )
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_grid_csv(path: str | Path, sweep_in_ghz: bool = False) -> SpectrumGrid:
    """Inverse of write_grid_csv; axes are inferred in file order."""
    scale = GHZ_TO_ANGULAR if sweep_in_ghz else 1.0
    with open(path, "r", encoding="utf-8") as handle:
        header = handle.readline().strip()
        if header != GRID_HEADER:
            raise ValueError(f"unexpected grid header {header!r}")
        sweep_vals: list[float] = []
        probe_vals: list[float] = []
        cells: list[tuple[float, bool]] = []
        for line in handle:
            line = line.strip()
            if not line:
                continue
            s, p, n, c = line.split(",")
            sval, pval = float(s) * scale, float(p) * GHZ_TO_ANGULAR
            if not sweep_vals or sval != sweep_vals[-1]:
                sweep_vals.append(sval)
            if len(sweep_vals) == 1:
                probe_vals.append(pval)
            cells.append((float(n), c == "1"))
    n_sweep, n_probe = len(sweep_vals), len(probe_vals)
    values = np.array([c[0] for c in cells]).reshape(n_sweep, n_probe)
    converged = np.array([c[1] for c in cells]).reshape(n_sweep, n_probe)
    return SpectrumGrid(
        sweep_values=np.array(sweep_vals),
        probe_freqs=np.array(probe_vals),
        values=values,
        converged=converged,
    )


def write_overlay_csv(
    path: str | Path, rows: Iterable[TransitionRow], sweep_in_ghz: bool = False
) -> None:
    scale = GHZ_TO_ANGULAR if sweep_in_ghz else 1.0
    lines = [OVERLAY_HEADER]
    for r in rows:
        lines.append(
            f"{_fmt(r.sweep_value / scale)},{r.from_label},{r.to_label},"
            f"{_fmt(r.frequency / GHZ_TO_ANGULAR)},{_fmt(r.matelem)},{_fmt(r.intensity)}"
        )
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_overlay_csv(path: str | Path, sweep_in_ghz: bool = False) -> list[TransitionRow]:
    scale = GHZ_TO_ANGULAR if sweep_in_ghz else 1.0
    rows = []
    with open(path, "r", encoding="utf-8") as handle:
        header = handle.readline().strip()
        if header != OVERLAY_HEADER:
            raise ValueError(f"unexpected overlay header {header!r}")
        for line in handle:
            line = line.strip()
            if not line:
                continue
            s, frm, to, f, m, i = line.split(",")
            rows.append(
                TransitionRow(
                    sweep_value=float(s) * scale,
                    from_label=frm,
                    to_label=to,
                    frequency=float(f) * GHZ_TO_ANGULAR,
                    matelem=float(m),
                    intensity=float(i),
                )
            )
    return rows


def write_analytic_csv(path: str | Path, rows: Iterable[dict[str, float]]) -> None:
    """Analytic transition curves; one row per drive amplitude."""
    lines = [ANALYTIC_HEADER]
    for r in rows:
        lines.append(
            f"{_fmt(r['rabi_MHz'])},{_fmt(r['power_dBm'])},{_fmt(r['w13_GHz'])},"
            f"{_fmt(r['w14_GHz'])},{_fmt(r['w23_GHz'])},{_fmt(r['w24_GHz'])}"
        )
    atomic_write_text(path, "\n".join(lines) + "\n")


def _device_block(device: DeviceParams) -> dict[str, float]:
    return {
        "omega_r_GHz": device.omega_r / GHZ_TO_ANGULAR,
        "omega_01_GHz": device.omega_01 / GHZ_TO_ANGULAR,
        "g0_MHz": device.g0 / MHZ_TO_ANGULAR,
        "alpha_MHz": device.alpha / MHZ_TO_ANGULAR,
        "kappa_per_us": device.kappa,
        "gamma1_per_us": device.gamma_1,
        "gamma_phi_per_us": device.gamma_phi,
        "calib_C": device.calib_C,
    }


def build_grid_meta(
    result: SweepResult,
    params_sha256: str,
    n_range: tuple[float, float] | None = None,
    normalized: bool = True,
) -> dict[str, Any]:
    """Metadata mirror of one sweep, written beside its CSV artifacts."""
    spec = result.spec
    sweep_in_ghz = spec.mode == "coupler_freq_sweep"
    axis_scale = GHZ_TO_ANGULAR if sweep_in_ghz else 1.0
    meta: dict[str, Any] = {
        "schema": GRID_SCHEMA,
        "mode": spec.mode,
        "engine": spec.engine,
        "sweep_axis": {
            "name": "drive_GHz" if sweep_in_ghz else "power_dbm",
            "values": [float(v) / axis_scale for v in spec.sweep_values],
        },
        "probe_axis_GHz": [float(v) / GHZ_TO_ANGULAR for v in spec.probe_freqs],
        "probe_rabi_MHz": spec.probe_rabi / MHZ_TO_ANGULAR,
        "drive": {
            "freq_GHz": None if result.drive_freq is None
            else result.drive_freq / GHZ_TO_ANGULAR,
            "power_dbm": spec.drive_power_dbm,
        },
        "device": _device_block(result.device),
        "hilbert": [spec.hilbert.n_transmon, spec.hilbert.n_resonator],
        "solver": {
            "method": "mcf",
            "tol": spec.mcf_tol,
            "n_start": spec.n_start,
            "n_max": spec.n_max,
        },
        "normalized": normalized,
        "params_sha256": params_sha256,
    }
    if n_range is not None:
        meta["n_range"] = [float(n_range[0]), float(n_range[1])]
    return meta


def write_grid_meta(path: str | Path, meta: dict[str, Any]) -> None:
    atomic_write_text(path, json.dumps(meta, indent=2, sort_keys=True) + "\n")

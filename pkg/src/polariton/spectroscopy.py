"""Spectroscopy sweeps: steady-state probe grids and eigenmode overlays.

A sweep scans one drive parameter (generator power or coupler frequency)
against a probe-frequency axis.  The master-equation engine fills a grid
of steady-state photon numbers cell by cell; the eigenmode engine
diagonalizes the coupler-frame Hamiltonian along the sweep axis and
tabulates probe transitions between tracked branches.  Columns are
independent, so the grid parallelizes over sweep values with
deterministic placement.
"""

from __future__ import annotations

import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from scipy.signal import find_peaks

from .errors import FlatGrid, PolaritonError, SweepFailed
from .model import (
    GHZ_TO_ANGULAR,
    MHZ_TO_ANGULAR,
    DeviceParams,
    DriveTone,
    ProbeTone,
    rabi_from_power,
)
from .hilbert import HilbertSpec, embed, number, resonator_lowering
from .hamiltonian import build_coupler_frame, build_two_tone
from .eigenmode import (
    EigenSolution,
    TransitionRow,
    diagonalize,
    dressed_frequencies,
    polariton_labels,
    track_branches,
    transition_table,
)
from .steadystate import (
    LiouvillianTriple,
    _commutator_superop,
    build_liouvillian,
    solve_mcf,
    solve_static,
)

MODES = ("power_sweep", "coupler_freq_sweep", "dispersive_compare")
ENGINES = ("eigenmode", "master_equation", "both")

# Window margin for the eigenmode overlay, beyond the probe axis ends.
OVERLAY_MARGIN = 4.0 * MHZ_TO_ANGULAR

DEFAULT_PROBE_START_GHZ = 7.14
DEFAULT_PROBE_STOP_GHZ = 7.20
DEFAULT_PROBE_STEP_MHZ = 0.5
DEFAULT_POWER_START_DBM = -80.0
DEFAULT_POWER_STOP_DBM = 0.0
DEFAULT_POWER_STEP_DB = 2.0
DEFAULT_PROBE_RABI = 0.05 * MHZ_TO_ANGULAR


@dataclass(frozen=True)
class SweepSpec:
    """Axes and solver settings for one spectroscopy run.

    Parameters
    ----------
    mode : str
        "power_sweep" scans generator power at fixed coupler frequency;
        "coupler_freq_sweep" scans the coupler frequency at fixed power.
    engine : str
        "master_equation", "eigenmode", or "both".
    sweep_values : ndarray
        Power axis in dBm, or coupler frequency axis in rad/us.
    probe_freqs : ndarray
        Probe frequency axis, rad/us, strictly increasing.
    drive_freq : float or None
        Coupler frequency in rad/us for power sweeps.  None selects the
        zero-photon dressed ge frequency of the device.
    drive_power_dbm : float or None
        Generator power for coupler-frequency sweeps.
    probe_rabi : float
        Probe amplitude, rad/us.  Must stay in the linear-response range.
    hilbert : HilbertSpec
        Truncation used by both engines.
    mcf_tol, n_start, n_max : solver settings passed through to solve_mcf.
    max_failure_frac : float
        Largest tolerated fraction of failed grid cells.
    """

    mode: str
    engine: str
    sweep_values: np.ndarray
    probe_freqs: np.ndarray
    drive_freq: float | None = None
    drive_power_dbm: float | None = None
    probe_rabi: float = DEFAULT_PROBE_RABI
    hilbert: HilbertSpec = field(default_factory=HilbertSpec)
    mcf_tol: float = 1e-8
    n_start: int = 8
    n_max: int = 128
    max_failure_frac: float = 0.05

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        sweep = np.asarray(self.sweep_values, dtype=float)
        probe = np.asarray(self.probe_freqs, dtype=float)
        if sweep.ndim != 1 or sweep.size == 0:
            raise ValueError("sweep_values must be a nonempty 1-d array")
        if probe.ndim != 1 or probe.size < 2:
            raise ValueError("probe_freqs must hold at least two points")
        if np.any(np.diff(probe) <= 0.0):
            raise ValueError("probe_freqs must be strictly increasing")
        if self.mode == "coupler_freq_sweep" and self.drive_power_dbm is None:
            raise ValueError("coupler_freq_sweep requires drive_power_dbm")
        if self.probe_rabi <= 0.0:
            raise ValueError(f"probe_rabi must be positive, got {self.probe_rabi}")
        if self.n_start < 1:
            raise ValueError(f"n_start must be >= 1, got {self.n_start}")
        if self.n_max < 2 * self.n_start:
            raise ValueError(
                f"n_max must allow at least one doubling of n_start, "
                f"got n_start={self.n_start}, n_max={self.n_max}"
            )
        object.__setattr__(self, "sweep_values", sweep)
        object.__setattr__(self, "probe_freqs", probe)


def default_power_sweep(
    engine: str = "both",
    hilbert: HilbertSpec | None = None,
) -> SweepSpec:
    """Standard spectroscopy window: -80..0 dBm against 7.14..7.20 GHz."""
    n_power = int(round((DEFAULT_POWER_STOP_DBM - DEFAULT_POWER_START_DBM)
                        / DEFAULT_POWER_STEP_DB)) + 1
    powers = DEFAULT_POWER_START_DBM + DEFAULT_POWER_STEP_DB * np.arange(n_power)
    span_mhz = (DEFAULT_PROBE_STOP_GHZ - DEFAULT_PROBE_START_GHZ) * 1e3
    n_probe = int(round(span_mhz / DEFAULT_PROBE_STEP_MHZ)) + 1
    probes_ghz = DEFAULT_PROBE_START_GHZ + (DEFAULT_PROBE_STEP_MHZ / 1e3) * np.arange(n_probe)
    return SweepSpec(
        mode="power_sweep",
        engine=engine,
        sweep_values=powers,
        probe_freqs=probes_ghz * GHZ_TO_ANGULAR,
        hilbert=hilbert if hilbert is not None else HilbertSpec(),
    )


@dataclass(frozen=True)
class SpectrumGrid:
    """Steady-state photon number over (sweep value, probe frequency).

    ``values`` has shape (len(sweep_values), len(probe_freqs)); failed
    cells hold NaN with ``converged`` False.
    """

    sweep_values: np.ndarray
    probe_freqs: np.ndarray
    values: np.ndarray
    converged: np.ndarray

    def __post_init__(self):
        shape = (len(self.sweep_values), len(self.probe_freqs))
        if self.values.shape != shape or self.converged.shape != shape:
            raise ValueError(
                f"grid shape {self.values.shape} does not match axes {shape}"
            )

    def normalize(self) -> "SpectrumGrid":
        """Affine map of the finite cells onto [0, 1].

        Idempotent: a second application is the identity.  Raises
        FlatGrid when the dynamic range is below 1e-15 or no cell is
        finite.
        """
        finite = np.isfinite(self.values)
        if not np.any(finite):
            raise FlatGrid("no finite cells to normalize")
        lo = float(np.min(self.values[finite]))
        hi = float(np.max(self.values[finite]))
        if hi - lo < 1e-15:
            raise FlatGrid(f"dynamic range {hi - lo:.3e} is below 1e-15")
        return replace(self, values=(self.values - lo) / (hi - lo))

    def failure_fraction(self) -> float:
        return 1.0 - float(np.mean(self.converged))


@dataclass(frozen=True)
class SweepResult:
    """Output of run_sweep: grid, overlay, and the resolved drive setup."""

    spec: SweepSpec
    device: DeviceParams
    grid: SpectrumGrid | None
    overlay: list[TransitionRow] | None
    drive_freq: float | None
    labels: dict[str, int] | None = None


def _resolve_drive_freq(device: DeviceParams, spec: SweepSpec) -> float | None:
    if spec.mode != "power_sweep":
        return None
    if spec.drive_freq is not None:
        return float(spec.drive_freq)
    return float(dressed_frequencies(device)["wge0"])


def _column_drive(device: DeviceParams, spec: SweepSpec,
                  drive_freq: float | None, value: float) -> DriveTone:
    if spec.mode == "power_sweep":
        return DriveTone(omega=drive_freq, rabi=rabi_from_power(value, device.calib_C))
    return DriveTone(
        omega=float(value),
        rabi=rabi_from_power(spec.drive_power_dbm, device.calib_C),
    )


def _me_column(
    device: DeviceParams,
    spec: SweepSpec,
    drive_freq: float | None,
    value: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Steady-state photon numbers along the probe axis at one sweep value.

    The probe frequency enters the Liouvillian only through the resonator
    detuning term and the ladder shifts, so the column reuses one base
    Liouvillian and adds (w0 - wp) * [-i [n_a, .]] per cell.
    """
    drive = _column_drive(device, spec, drive_freq, value)
    probes = spec.probe_freqs
    base_probe = ProbeTone(omega=float(probes[0]), rabi=spec.probe_rabi)
    base = build_liouvillian(
        build_two_tone(device, spec.hilbert, drive, base_probe), device
    )
    n_a = embed(number(spec.hilbert.n_resonator), "resonator", spec.hilbert)
    comm_n = _commutator_superop(n_a)
    values = np.full(probes.size, np.nan)
    converged = np.zeros(probes.size, dtype=bool)
    for i, omega_p in enumerate(probes):
        l0 = base.l0 + (probes[0] - omega_p) * comm_n
        triple = LiouvillianTriple(
            l0=l0, l1=base.l1, lm1=base.lm1,
            delta=float(omega_p - drive.omega), spec=spec.hilbert,
        )
        try:
            state = solve_mcf(
                triple, tol=spec.mcf_tol, n_start=spec.n_start, n_max=spec.n_max
            )
        except PolaritonError:
            continue
        values[i] = state.n_photons
        converged[i] = True
    return values, converged


def _eigen_column(
    device: DeviceParams,
    spec: SweepSpec,
    drive_freq: float | None,
    value: float,
) -> tuple[EigenSolution, np.ndarray]:
    """Coupler-frame eigenmodes and drive-only steady state at one value."""
    drive = _column_drive(device, spec, drive_freq, value)
    ham = build_coupler_frame(device, spec.hilbert, drive)
    solution = diagonalize(ham)
    rho = solve_static(build_liouvillian(ham, device)).rho0
    return solution, rho


def _sweep_column(args) -> tuple[int, dict]:
    """Worker entry: compute the requested engines for one sweep value."""
    index, device, spec, drive_freq, value, want_me, want_eigen = args
    out: dict = {}
    if want_me:
        out["me"] = _me_column(device, spec, drive_freq, value)
    if want_eigen:
        out["eigen"] = _eigen_column(device, spec, drive_freq, value)
    return index, out


def run_sweep(
    device: DeviceParams,
    spec: SweepSpec,
    workers: int = 1,
    verbose: bool = False,
) -> SweepResult:
    """Execute a sweep and return grid and/or overlay per the engine.

    Columns are distributed over ``workers`` processes and written back
    by index, so results are identical for any worker count.  A grid
    with more than ``max_failure_frac`` failed cells raises SweepFailed;
    the partial data is attached to the exception for inspection.
    """
    if spec.mode == "dispersive_compare":
        raise ValueError("use dispersive_compare() for mode 'dispersive_compare'")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    drive_freq = _resolve_drive_freq(device, spec)
    want_me = spec.engine in ("master_equation", "both")
    want_eigen = spec.engine in ("eigenmode", "both")
    n_sweep = spec.sweep_values.size
    tasks = [
        (k, device, spec, drive_freq, float(v), want_me, want_eigen)
        for k, v in enumerate(spec.sweep_values)
    ]
    results: list[dict | None] = [None] * n_sweep
    if workers == 1:
        for task in tasks:
            k, out = _sweep_column(task)
            results[k] = out
            if verbose:
                print(f"column {k + 1}/{n_sweep}", file=sys.stderr, flush=True)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for k, out in pool.map(_sweep_column, tasks):
                results[k] = out
                if verbose:
                    print(f"column {k + 1}/{n_sweep}", file=sys.stderr, flush=True)

    grid = None
    if want_me:
        values = np.vstack([r["me"][0] for r in results])
        converged = np.vstack([r["me"][1] for r in results])
        grid = SpectrumGrid(
            sweep_values=spec.sweep_values,
            probe_freqs=spec.probe_freqs,
            values=values,
            converged=converged,
        )

    overlay = None
    labels = None
    if want_eigen:
        solutions = track_branches([r["eigen"][0] for r in results])
        labels = polariton_labels(solutions[0], device, spec.hilbert)
        a_op = resonator_lowering(spec.hilbert)
        window = (
            float(spec.probe_freqs[0]) - OVERLAY_MARGIN,
            float(spec.probe_freqs[-1]) + OVERLAY_MARGIN,
        )
        overlay = []
        for k, value in enumerate(spec.sweep_values):
            drive = _column_drive(device, spec, drive_freq, float(value))
            overlay.extend(
                transition_table(
                    solutions[k],
                    results[k]["eigen"][1],
                    a_op,
                    drive.omega,
                    sweep_value=float(value),
                    window=window,
                    labels=labels,
                )
            )

    result = SweepResult(
        spec=spec, device=device, grid=grid, overlay=overlay,
        drive_freq=drive_freq, labels=labels,
    )
    if grid is not None and grid.failure_fraction() > spec.max_failure_frac:
        raise SweepFailed(
            f"{grid.failure_fraction():.1%} of grid cells failed "
            f"(limit {spec.max_failure_frac:.1%})",
            result,
        )
    return result


@dataclass(frozen=True)
class DispersiveComparison:
    """Identical sweeps of the reference device and a far-detuned twin."""

    primary: SweepResult
    detuned: SweepResult
    detuned_device: DeviceParams


def detuned_twin(device: DeviceParams, detuning_ghz: float = 1.0) -> DeviceParams:
    """Same device with the transmon moved detuning_ghz below the resonator."""
    return device.with_(omega_01=device.omega_r - detuning_ghz * GHZ_TO_ANGULAR)


def dispersive_compare(
    device: DeviceParams,
    spec: SweepSpec,
    workers: int = 1,
    verbose: bool = False,
    detuning_ghz: float = 1.0,
) -> DispersiveComparison:
    """Run the same sweep on the device and on its dispersive twin.

    Both runs share axes, probe amplitude, and solver settings; each
    drives its own zero-photon dressed ge frequency.
    """
    base_spec = replace(spec, mode="power_sweep", drive_freq=None) \
        if spec.mode == "dispersive_compare" else spec
    twin = detuned_twin(device, detuning_ghz)
    primary = run_sweep(device, base_spec, workers=workers, verbose=verbose)
    detuned = run_sweep(twin, base_spec, workers=workers, verbose=verbose)
    return DispersiveComparison(primary=primary, detuned=detuned, detuned_device=twin)


def find_spectral_peaks(
    probe_freqs: np.ndarray,
    values: np.ndarray,
    prominence_frac: float = 0.05,
) -> list[tuple[float, float]]:
    """Local maxima of one spectrum column with subgrid refinement.

    Peaks are located with a prominence floor relative to the finite
    dynamic range, then refined by fitting a parabola through the three
    samples around each maximum.  Returns (frequency, height) pairs in
    ascending frequency.  NaN cells split the column into segments that
    are searched independently.
    """
    freqs = np.asarray(probe_freqs, dtype=float)
    vals = np.asarray(values, dtype=float)
    finite = np.isfinite(vals)
    if not np.any(finite):
        return []
    lo = float(np.min(vals[finite]))
    hi = float(np.max(vals[finite]))
    if hi - lo <= 0.0:
        return []
    prominence = prominence_frac * (hi - lo)
    peaks: list[tuple[float, float]] = []
    # split into contiguous finite segments
    boundaries = np.flatnonzero(np.diff(finite.astype(int)))
    starts = [0] + list(boundaries + 1)
    stops = list(boundaries + 1) + [len(vals)]
    for start, stop in zip(starts, stops):
        if not finite[start]:
            continue
        seg_v = vals[start:stop]
        seg_f = freqs[start:stop]
        if seg_v.size < 3:
            continue
        idx, _ = find_peaks(seg_v, prominence=prominence)
        for i in idx:
            ym, y0, yp = seg_v[i - 1], seg_v[i], seg_v[i + 1]
            denom = ym - 2.0 * y0 + yp
            shift = 0.0 if denom == 0.0 else 0.5 * (ym - yp) / denom
            shift = float(np.clip(shift, -0.5, 0.5))
            step = 0.5 * (seg_f[i + 1] - seg_f[i - 1])
            freq = seg_f[i] + shift * step
            height = y0 - 0.25 * (ym - yp) * shift
            peaks.append((float(freq), float(height)))
    return sorted(peaks)


def count_resolved_lines(
    probe_freqs: np.ndarray,
    values: np.ndarray,
    kappa: float,
    prominence_frac: float = 0.05,
    height_frac: float = 0.0,
) -> list[float]:
    """Cluster peaks closer than kappa and return one frequency each.

    Two spectral lines count as resolved only when their maxima are
    separated by more than the resonator linewidth.  Clusters merge
    greedily left to right; each cluster reports its strongest member.

    ``height_frac`` additionally drops peaks whose absolute height falls
    below that fraction of the column maximum.  Unlike the prominence
    floor this keeps weak modulations riding on a strong drive-induced
    pedestal while rejecting faint satellites of a dominant line.
    """
    peaks = find_spectral_peaks(probe_freqs, values, prominence_frac)
    if height_frac > 0.0 and peaks:
        floor = height_frac * float(np.nanmax(np.asarray(values, dtype=float)))
        peaks = [(f, h) for f, h in peaks if h >= floor]
    if not peaks:
        return []
    clusters: list[list[tuple[float, float]]] = [[peaks[0]]]
    for freq, height in peaks[1:]:
        if freq - clusters[-1][-1][0] <= kappa:
            clusters[-1].append((freq, height))
        else:
            clusters.append([(freq, height)])
    return [max(c, key=lambda p: p[1])[0] for c in clusters]

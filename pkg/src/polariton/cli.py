"""Command-line entry points.

Subcommands map onto the library layers: ``sweep`` and
``compare-dispersive`` drive the steady-state grid engines, ``eigen``
the coupler-frame overlay, ``crossing`` the closed-form transition
curves, and ``validate`` checks a configuration without running
anything.  Exit codes: 0 on success, 2 for configuration or usage
errors, 1 for runtime failures such as an over-budget fraction of
unconverged grid cells.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, PolaritonError, SweepFailed
from .model import MHZ_TO_ANGULAR, GHZ_TO_ANGULAR, rabi_from_power
from .eigenmode import dressed_frequencies
from .analytic import dispersive_transitions, find_crossing, perturbed_transitions, resolvability_threshold
from .config import apply_overrides, build_device, build_sweep, config_hash, load_config
from .spectroscopy import SweepResult, detuned_twin, dispersive_compare, run_sweep
from .artifacts import (
    atomic_write_text,
    build_grid_meta,
    write_analytic_csv,
    write_grid_csv,
    write_grid_meta,
    write_overlay_csv,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polariton",
        description="Steady-state spectroscopy of a driven transmon-resonator system.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", default=None, help="YAML configuration file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--workers", type=int, default=1, help="worker processes")
        p.add_argument(
            "--engine", default=None,
            choices=("eigenmode", "master_equation", "both"),
            help="override sweep.engine",
        )
        p.add_argument(
            "--params", action="extend", nargs="+", default=[], metavar="KEY=VALUE",
            help="dotted config overrides, repeatable",
        )
        p.add_argument("--verbose", action="store_true", help="progress to stderr")

    for name, help_text in (
        ("eigen", "coupler-frame eigenmode overlay and dressed frequencies"),
        ("sweep", "steady-state spectroscopy grid"),
        ("compare-dispersive", "same sweep on the device and a far-detuned twin"),
        ("crossing", "closed-form transition curves and crossing estimate"),
        ("validate", "check a configuration and print its hash"),
    ):
        p = sub.add_parser(name, help=help_text)
        common(p)
    return parser


def _write_sweep_artifacts(
    out: Path,
    result: SweepResult,
    cfg_hash: str,
    normalize: bool,
    stem: str = "grid",
) -> None:
    sweep_in_ghz = result.spec.mode == "coupler_freq_sweep"
    n_range = None
    grid = result.grid
    if grid is not None:
        finite = grid.values[np.isfinite(grid.values)]
        if finite.size:
            n_range = (float(np.min(finite)), float(np.max(finite)))
        if normalize:
            grid = grid.normalize()
        write_grid_csv(out / f"{stem}.csv", grid, sweep_in_ghz=sweep_in_ghz)
    if result.overlay is not None:
        suffix = "" if stem == "grid" else stem.removeprefix("grid")
        write_overlay_csv(
            out / f"overlay{suffix}.csv", result.overlay, sweep_in_ghz=sweep_in_ghz
        )
    meta = build_grid_meta(
        result, cfg_hash, n_range=n_range,
        normalized=normalize and grid is not None,
    )
    write_grid_meta(out / f"{stem}_meta.json", meta)


def cmd_validate(args, cfg) -> int:
    print(json.dumps(cfg, indent=2, sort_keys=True))
    print(f"params_sha256: {config_hash(cfg)}")
    return 0


def cmd_eigen(args, cfg) -> int:
    device = build_device(cfg)
    spec = build_sweep(cfg)
    spec = replace(spec, engine="eigenmode")
    result = run_sweep(device, spec, workers=args.workers, verbose=args.verbose)
    out = Path(args.out)
    _write_sweep_artifacts(out, result, config_hash(cfg), normalize=False)
    for key, value in dressed_frequencies(device).items():
        unit = "MHz" if key == "chi" else "GHz"
        scale = MHZ_TO_ANGULAR if key == "chi" else GHZ_TO_ANGULAR
        print(f"{key}_{unit} = {value / scale:.6f}")
    return 0


def cmd_sweep(args, cfg) -> int:
    device = build_device(cfg)
    spec = build_sweep(cfg)
    out = Path(args.out)
    normalize = cfg["output"]["normalize"]
    try:
        result = run_sweep(device, spec, workers=args.workers, verbose=args.verbose)
    except SweepFailed as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        _write_sweep_artifacts(out, exc.result, config_hash(cfg), normalize=False)
        return 1
    _write_sweep_artifacts(out, result, config_hash(cfg), normalize=normalize)
    return 0


def cmd_compare_dispersive(args, cfg) -> int:
    device = build_device(cfg)
    spec = build_sweep(cfg)
    out = Path(args.out)
    normalize = cfg["output"]["normalize"]
    cfg_hash = config_hash(cfg)
    comparison_ok = True
    if spec.mode == "dispersive_compare":
        spec = replace(spec, mode="power_sweep")
    for stem, dev in (
        ("grid", device),
        ("grid_detuned", detuned_twin(device, cfg["sweep"]["detuning_GHz"])),
    ):
        try:
            result = run_sweep(dev, spec, workers=args.workers, verbose=args.verbose)
        except SweepFailed as exc:
            print(f"error: {stem}: {exc.args[0]}", file=sys.stderr)
            _write_sweep_artifacts(out, exc.result, cfg_hash, normalize=False, stem=stem)
            comparison_ok = False
            continue
        _write_sweep_artifacts(out, result, cfg_hash, normalize=normalize, stem=stem)
    return 0 if comparison_ok else 1


def cmd_crossing(args, cfg) -> int:
    device = build_device(cfg)
    sw = cfg["sweep"]
    dressed = dressed_frequencies(device)
    chi, wrt = dressed["chi"], dressed["wr_tilde"]
    estimate = find_crossing(chi, device.alpha, calib_C=device.calib_C)
    chi_min = resolvability_threshold(device.kappa, device.alpha)
    out = Path(args.out)
    powers = np.arange(
        sw["power_start_dbm"], sw["power_stop_dbm"] + 1e-9, sw["power_step_db"]
    )
    rows = []
    for power in powers:
        rabi = rabi_from_power(float(power), device.calib_C)
        disp = dispersive_transitions(chi, rabi, wrt)
        pert = perturbed_transitions(chi, rabi, wrt, device.alpha)
        rows.append({
            "rabi_MHz": rabi / MHZ_TO_ANGULAR,
            "power_dBm": float(power),
            "w13_GHz": pert.w13 / GHZ_TO_ANGULAR,
            "w14_GHz": disp.w14 / GHZ_TO_ANGULAR,
            "w23_GHz": disp.w23 / GHZ_TO_ANGULAR,
            "w24_GHz": pert.w24 / GHZ_TO_ANGULAR,
        })
    write_analytic_csv(out / "analytic.csv", rows)
    summary = {
        "chi_MHz": chi / MHZ_TO_ANGULAR,
        "omega_r_tilde_GHz": wrt / GHZ_TO_ANGULAR,
        "crossing_rabi_MHz": estimate.rabi / MHZ_TO_ANGULAR,
        "crossing_power_dBm": estimate.power_dbm,
        "small_chi_rabi_MHz": estimate.rabi_small_chi / MHZ_TO_ANGULAR,
        "small_chi_power_dBm": estimate.power_dbm_small_chi,
        "chi_min_rad_per_us": chi_min,
        "crossing_resolvable": bool(chi > chi_min),
        "params_sha256": config_hash(cfg),
    }
    atomic_write_text(out / "crossing.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(
        f"crossing at {estimate.rabi / MHZ_TO_ANGULAR:.3f} MHz "
        f"({estimate.power_dbm:.2f} dBm); small-chi estimate "
        f"{estimate.rabi_small_chi / MHZ_TO_ANGULAR:.3f} MHz "
        f"({estimate.power_dbm_small_chi:.2f} dBm)"
    )
    return 0


HANDLERS = {
    "eigen": cmd_eigen,
    "sweep": cmd_sweep,
    "compare-dispersive": cmd_compare_dispersive,
    "crossing": cmd_crossing,
    "validate": cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        cfg = apply_overrides(cfg, args.params)
        if args.engine is not None:
            cfg["sweep"]["engine"] = args.engine
        if args.workers < 1:
            raise ConfigError(f"--workers must be >= 1, got {args.workers}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return HANDLERS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PolaritonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

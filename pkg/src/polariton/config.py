"""Run configuration: defaults, YAML loading, overrides, and hashing.

A run is described by a nested mapping with blocks ``device``, ``sweep``,
``hilbert``, ``solver``, and ``output``.  Files and command-line
overrides are validated against the default tree: unknown keys are
rejected with their dotted path, and values must match the type family
of the default they replace.
"""

from __future__ import annotations

import copy
import hashlib
import json
from typing import Any

import numpy as np
import yaml

from .errors import ConfigError
from .model import GHZ_TO_ANGULAR, MHZ_TO_ANGULAR, DeviceParams
from .hilbert import HilbertSpec
from .spectroscopy import SweepSpec

DEFAULTS: dict[str, Any] = {
    "device": {
        "omega_r_GHz": 7.180,
        "omega_01_GHz": 7.611,
        "g0_MHz": 46.57,
        "alpha_MHz": -291.4,
        "kappa_per_us": 3.09,
        "gamma1_per_us": 1.11,
        "gamma_phi_per_us": 1.32,
        "calib_C": 0.562,
    },
    "sweep": {
        "mode": "power_sweep",
        "engine": "both",
        "power_start_dbm": -80.0,
        "power_stop_dbm": 0.0,
        "power_step_db": 2.0,
        "probe_start_GHz": 7.14,
        "probe_stop_GHz": 7.20,
        "probe_step_MHz": 0.5,
        "probe_rabi_MHz": 0.05,
        "drive_freq_GHz": None,
        "drive_power_dbm": None,
        "drive_start_GHz": None,
        "drive_stop_GHz": None,
        "drive_step_MHz": None,
        "detuning_GHz": 1.0,
    },
    "hilbert": {
        "n_transmon": 4,
        "n_resonator": 4,
    },
    "solver": {
        "mcf_tol": 1.0e-8,
        "n_start": 8,
        "n_max": 128,
        "max_failure_frac": 0.05,
    },
    "output": {
        "normalize": True,
    },
}


def _merge(base: dict, update: dict, path: str) -> None:
    for key, value in update.items():
        here = f"{path}.{key}" if path else str(key)
        if key not in base:
            raise ConfigError(f"{here}: unknown key")
        default = base[key]
        if isinstance(default, dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{here}: expected a mapping")
            _merge(default, value, here)
            continue
        base[key] = _coerce(here, default, value)


def _coerce(path: str, default: Any, value: Any) -> Any:
    if value is None:
        if default is None or isinstance(default, (int, float)):
            return None
        raise ConfigError(f"{path}: null is not allowed here")
    if isinstance(default, bool):
        if isinstance(value, bool):
            return value
        raise ConfigError(f"{path}: expected a boolean, got {value!r}")
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return value
    if isinstance(default, float) or default is None:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(f"{path}: expected a string, got {value!r}")
        return value
    raise ConfigError(f"{path}: unsupported value {value!r}")


def load_config(path: str | None = None) -> dict[str, Any]:
    """Defaults merged with an optional YAML file.

    Raises ConfigError for unreadable files, non-mapping documents,
    unknown keys, and type mismatches.
    """
    cfg = copy.deepcopy(DEFAULTS)
    if path is None:
        return cfg
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = yaml.safe_load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}") from exc
    if doc is None:
        return cfg
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")
    _merge(cfg, doc, "")
    return cfg


def apply_overrides(cfg: dict[str, Any], overrides: list[str]) -> dict[str, Any]:
    """Apply ``block.key=value`` strings on top of a configuration.

    Values are parsed as YAML scalars, so numbers, booleans, and null
    work as expected; anything else stays a string.
    """
    out = copy.deepcopy(cfg)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        dotted, raw = item.split("=", 1)
        keys = dotted.split(".")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError:
            value = raw
        node = out
        defaults_node: Any = DEFAULTS
        for key in keys[:-1]:
            if not isinstance(node, dict) or key not in node:
                raise ConfigError(f"{dotted}: unknown key")
            node = node[key]
            defaults_node = defaults_node[key]
        leaf = keys[-1]
        if not isinstance(node, dict) or leaf not in node:
            raise ConfigError(f"{dotted}: unknown key")
        if isinstance(node[leaf], dict):
            raise ConfigError(f"{dotted}: cannot override a whole block")
        node[leaf] = _coerce(dotted, defaults_node[leaf], value)
    return out


def config_hash(cfg: dict[str, Any]) -> str:
    """SHA-256 over the canonical JSON form of the configuration."""
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def build_device(cfg: dict[str, Any]) -> DeviceParams:
    dev = cfg["device"]
    try:
        return DeviceParams.from_frequencies(
            omega_r_GHz=dev["omega_r_GHz"],
            omega_01_GHz=dev["omega_01_GHz"],
            g0_MHz=dev["g0_MHz"],
            alpha_MHz=dev["alpha_MHz"],
            kappa_per_us=dev["kappa_per_us"],
            gamma1_per_us=dev["gamma1_per_us"],
            gamma_phi_per_us=dev["gamma_phi_per_us"],
            calib_C=dev["calib_C"],
        )
    except ValueError as exc:
        raise ConfigError(f"device: {exc}") from exc


def _axis(start: float, stop: float, step: float, path: str) -> np.ndarray:
    if step <= 0.0:
        raise ConfigError(f"{path}: step must be positive, got {step}")
    if stop < start:
        raise ConfigError(f"{path}: stop {stop} is below start {start}")
    count = int(round((stop - start) / step)) + 1
    return start + step * np.arange(count)


def build_sweep(cfg: dict[str, Any]) -> SweepSpec:
    sw = cfg["sweep"]
    hb = cfg["hilbert"]
    sv = cfg["solver"]
    try:
        hilbert = HilbertSpec(n_transmon=hb["n_transmon"], n_resonator=hb["n_resonator"])
    except ValueError as exc:
        raise ConfigError(f"hilbert: {exc}") from exc
    probe = _axis(
        sw["probe_start_GHz"],
        sw["probe_stop_GHz"],
        sw["probe_step_MHz"] / 1e3,
        "sweep.probe",
    ) * GHZ_TO_ANGULAR
    mode = sw["mode"]
    if mode in ("power_sweep", "dispersive_compare"):
        values = _axis(
            sw["power_start_dbm"], sw["power_stop_dbm"], sw["power_step_db"],
            "sweep.power",
        )
    elif mode == "coupler_freq_sweep":
        for key in ("drive_start_GHz", "drive_stop_GHz", "drive_step_MHz"):
            if sw[key] is None:
                raise ConfigError(f"sweep.{key}: required for coupler_freq_sweep")
        if sw["drive_power_dbm"] is None:
            raise ConfigError("sweep.drive_power_dbm: required for coupler_freq_sweep")
        values = _axis(
            sw["drive_start_GHz"], sw["drive_stop_GHz"], sw["drive_step_MHz"] / 1e3,
            "sweep.drive",
        ) * GHZ_TO_ANGULAR
    else:
        raise ConfigError(f"sweep.mode: unknown mode {mode!r}")
    drive_freq = sw["drive_freq_GHz"]
    try:
        return SweepSpec(
            mode=mode,
            engine=sw["engine"],
            sweep_values=values,
            probe_freqs=probe,
            drive_freq=None if drive_freq is None else drive_freq * GHZ_TO_ANGULAR,
            drive_power_dbm=sw["drive_power_dbm"],
            probe_rabi=sw["probe_rabi_MHz"] * MHZ_TO_ANGULAR,
            hilbert=hilbert,
            mcf_tol=sv["mcf_tol"],
            n_start=sv["n_start"],
            n_max=sv["n_max"],
            max_failure_frac=sv["max_failure_frac"],
        )
    except ValueError as exc:
        raise ConfigError(f"sweep: {exc}") from exc

"""End-to-end tests of the command-line interface.

All but one test drive main() in process for speed; a single subprocess
test covers the installed entry point.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from polariton.cli import main
from polariton.config import apply_overrides, config_hash, load_config

MICRO = [
    "sweep.power_start_dbm=-50",
    "sweep.power_stop_dbm=-40",
    "sweep.power_step_db=10",
    "sweep.probe_start_GHz=7.16",
    "sweep.probe_stop_GHz=7.19",
    "sweep.probe_step_MHz=3.0",
    "hilbert.n_transmon=3",
    "hilbert.n_resonator=3",
]


def test_validate_prints_config_and_hash(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    body, tail = out.rsplit("params_sha256:", 1)
    assert json.loads(body) == load_config(None)
    assert tail.strip() == config_hash(load_config(None))


def test_version_flag_exits_cleanly(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert capsys.readouterr().out.startswith("polariton ")


def test_crossing_writes_summary_and_curves(tmp_path, capsys):
    assert main(["crossing", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "35.63" in out and "-23.96" in out
    summary = json.loads((tmp_path / "crossing.json").read_text())
    np.testing.assert_allclose(summary["chi_MHz"], 8.591940, atol=1e-5)
    np.testing.assert_allclose(summary["crossing_rabi_MHz"], 35.630511, atol=1e-4)
    np.testing.assert_allclose(summary["crossing_power_dBm"], -23.958, atol=1e-3)
    np.testing.assert_allclose(summary["small_chi_power_dBm"], -24.019, atol=1e-3)
    assert summary["crossing_resolvable"] is True
    lines = (tmp_path / "analytic.csv").read_text().splitlines()
    assert lines[0] == "rabi_MHz,power_dBm,w13_GHz,w14_GHz,w23_GHz,w24_GHz"
    assert len(lines) == 1 + 41  # default power axis
    first = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert float(first["power_dBm"]) == -80.0
    # inner pair straddles the mean resonator frequency
    mid = 0.5 * (float(first["w13_GHz"]) + float(first["w24_GHz"]))
    np.testing.assert_allclose(mid, summary["omega_r_tilde_GHz"], rtol=1e-12)


def test_sweep_micro_grid_artifacts(tmp_path, capsys):
    out1 = tmp_path / "a"
    args = ["sweep", "--engine", "master_equation", "--params", *MICRO]
    assert main([*args, "--out", str(out1)]) == 0
    assert (out1 / "grid.csv").exists()
    assert not (out1 / "overlay.csv").exists()
    meta = json.loads((out1 / "grid_meta.json").read_text())
    assert meta["schema"] == "polariton-grid/1"
    assert meta["mode"] == "power_sweep"
    assert meta["engine"] == "master_equation"
    assert meta["normalized"] is True
    assert meta["hilbert"] == [3, 3]
    assert len(meta["sweep_axis"]["values"]) == 2
    assert len(meta["probe_axis_GHz"]) == 11
    lo, hi = meta["n_range"]
    assert 0.0 < lo < hi
    cfg = apply_overrides(load_config(None), MICRO)
    cfg["sweep"]["engine"] = "master_equation"
    assert meta["params_sha256"] == config_hash(cfg)
    # identical rerun reproduces the grid byte for byte
    out2 = tmp_path / "b"
    assert main([*args, "--out", str(out2)]) == 0
    assert (out1 / "grid.csv").read_bytes() == (out2 / "grid.csv").read_bytes()


def test_sweep_eigenmode_only_writes_overlay(tmp_path, capsys):
    assert main([
        "sweep", "--engine", "eigenmode", "--params", *MICRO,
        "--out", str(tmp_path),
    ]) == 0
    assert (tmp_path / "overlay.csv").exists()
    assert not (tmp_path / "grid.csv").exists()
    meta = json.loads((tmp_path / "grid_meta.json").read_text())
    assert meta["engine"] == "eigenmode"
    assert meta["normalized"] is False
    assert "n_range" not in meta
    header = (tmp_path / "overlay.csv").read_text().splitlines()[0]
    assert header == "sweep_value,from,to,freq_GHz,matelem,intensity"


def test_eigen_prints_dressed_frequencies(tmp_path, capsys):
    assert main([
        "eigen", "--params", *MICRO, "--out", str(tmp_path),
    ]) == 0
    out = capsys.readouterr().out
    assert "wge0_GHz = 7.615975" in out
    assert "wrg_GHz = 7.175025" in out
    assert "chi_MHz = 8.591940" in out
    assert (tmp_path / "overlay.csv").exists()


def test_compare_dispersive_writes_both_runs(tmp_path, capsys):
    assert main([
        "compare-dispersive", "--engine", "eigenmode", "--params", *MICRO,
        "--out", str(tmp_path),
    ]) == 0
    for name in ("overlay.csv", "overlay_detuned.csv",
                 "grid_meta.json", "grid_detuned_meta.json"):
        assert (tmp_path / name).exists(), name
    meta = json.loads((tmp_path / "grid_meta.json").read_text())
    twin_meta = json.loads((tmp_path / "grid_detuned_meta.json").read_text())
    assert meta["device"]["omega_01_GHz"] == 7.611
    np.testing.assert_allclose(twin_meta["device"]["omega_01_GHz"], 6.180)
    assert twin_meta["drive"]["freq_GHz"] < meta["drive"]["freq_GHz"]


def test_unknown_override_is_a_usage_error(tmp_path, capsys):
    code = main(["sweep", "--params", "sweep.power=3", "--out", str(tmp_path)])
    assert code == 2
    assert "config error" in capsys.readouterr().err


def test_bad_worker_count_is_a_usage_error(capsys):
    assert main(["validate", "--workers", "0"]) == 2
    assert "config error" in capsys.readouterr().err


def test_anchor_failure_is_a_runtime_error(tmp_path, capsys):
    # at -7 dBm the coupler dresses the states beyond recognition, so
    # polariton labeling fails and the sweep reports a runtime failure
    code = main([
        "sweep", "--engine", "eigenmode", "--out", str(tmp_path), "--params",
        "sweep.power_start_dbm=-7",
        "sweep.power_stop_dbm=-7",
        "sweep.probe_start_GHz=7.16",
        "sweep.probe_stop_GHz=7.19",
        "sweep.probe_step_MHz=3.0",
        "hilbert.n_transmon=3",
        "hilbert.n_resonator=3",
    ])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_module_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "polariton", "validate"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert "params_sha256" in proc.stdout

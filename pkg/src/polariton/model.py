"""Device parameters, derived quantities and drive/probe tone definitions.

Internal unit convention: angular frequencies in rad/us, decay rates in 1/us.
Configuration files and CSV artifacts use GHz / MHz / dBm; the conversion
helpers below are the only place the two meet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateDetuning

__all__ = [
    "GHZ_TO_ANGULAR",
    "MHZ_TO_ANGULAR",
    "DeviceParams",
    "DerivedParams",
    "DriveTone",
    "ProbeTone",
    "reference_device",
    "derive_params",
    "rabi_from_power",
    "power_from_rabi",
]

# 1 GHz = 1000 cycles/us = 2*pi*1000 rad/us
GHZ_TO_ANGULAR = 2.0 * math.pi * 1e3
MHZ_TO_ANGULAR = 2.0 * math.pi


@dataclass(frozen=True)
class DeviceParams:
    """Bare transmon-resonator parameters, angular units (rad/us, 1/us).

    Attributes
    ----------
    omega_r : float
        Bare resonator frequency.
    omega_01 : float
        Bare transmon 0-1 transition frequency.
    g0 : float
        Vacuum coupling of the 0-1 transition; higher levels couple as
        g_j = g0*sqrt(j+1).
    alpha : float
        Transmon anharmonicity (negative).
    kappa, gamma_1, gamma_phi : float
        Resonator decay, transmon decay, transmon pure dephasing rates.
    calib_C : float
        Drive-line calibration constant mapping dBm to Rabi frequency.
    """

    omega_r: float
    omega_01: float
    g0: float
    alpha: float
    kappa: float
    gamma_1: float
    gamma_phi: float
    calib_C: float = 0.562

    def __post_init__(self):
        if self.alpha >= 0.0:
            raise ValueError("anharmonicity alpha must be negative")
        for name in ("kappa", "gamma_1", "gamma_phi"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"rate {name} must be non-negative")
        if self.g0 < 0.0:
            raise ValueError("coupling g0 must be non-negative")

    @classmethod
    def from_frequencies(
        cls,
        omega_r_GHz: float,
        omega_01_GHz: float,
        g0_MHz: float,
        alpha_MHz: float,
        kappa_per_us: float,
        gamma1_per_us: float,
        gamma_phi_per_us: float,
        calib_C: float = 0.562,
    ) -> "DeviceParams":
        """Build from the laboratory unit convention used in config files."""
        return cls(
            omega_r=omega_r_GHz * GHZ_TO_ANGULAR,
            omega_01=omega_01_GHz * GHZ_TO_ANGULAR,
            g0=g0_MHz * MHZ_TO_ANGULAR,
            alpha=alpha_MHz * MHZ_TO_ANGULAR,
            kappa=kappa_per_us,
            gamma_1=gamma1_per_us,
            gamma_phi=gamma_phi_per_us,
            calib_C=calib_C,
        )

    def transmon_level(self, j: int) -> float:
        """Duffing ladder energy omega_j = j*omega_01 + j(j-1)/2 * alpha."""
        return j * self.omega_01 + 0.5 * j * (j - 1) * self.alpha

    def with_(self, **changes) -> "DeviceParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class DerivedParams:
    """Level-resolved couplings, detunings and dispersive shifts.

    Arrays run over the coupled level pairs j -> j+1 for j = 0..n_levels-2.
    ``chi`` is the two-level effective shift chi_01 - chi_12/2 (signed; it is
    negative for the reference device). ``omega_r_prime`` and
    ``omega_01_prime`` are the corresponding dispersive estimates of the
    dressed frequencies.
    """

    n_levels: int
    g: np.ndarray
    delta: np.ndarray
    chi_ladder: np.ndarray
    chi: float
    omega_r_prime: float
    omega_01_prime: float


def derive_params(device: DeviceParams, n_levels: int = 4) -> DerivedParams:
    """Compute g_j, Delta_j and chi_{j,j+1} for the lowest ``n_levels`` levels.

    Parameters
    ----------
    device : DeviceParams
    n_levels : int
        Number of transmon levels retained; couplings exist for
        j = 0..n_levels-2.

    Raises
    ------
    DegenerateDetuning
        If any |Delta_j| < 1e-9 rad/us (the dispersive ladder would divide
        by zero).
    """
    if n_levels < 2:
        raise ValueError("need at least two transmon levels")
    j = np.arange(n_levels - 1)
    g = device.g0 * np.sqrt(j + 1.0)
    # Delta_j = omega_{j,j+1} - omega_r with omega_{j,j+1} = omega_01 + j*alpha
    delta = device.omega_01 + j * device.alpha - device.omega_r
    small = np.abs(delta) < 1e-9
    if np.any(small):
        bad = int(np.flatnonzero(small)[0])
        raise DegenerateDetuning(f"Delta_{bad} is numerically zero")
    chi_ladder = g**2 / delta
    chi01 = float(chi_ladder[0])
    chi12 = float(chi_ladder[1]) if n_levels >= 3 else 0.0
    return DerivedParams(
        n_levels=n_levels,
        g=g,
        delta=delta,
        chi_ladder=chi_ladder,
        chi=chi01 - 0.5 * chi12,
        omega_r_prime=device.omega_r - 0.5 * chi12,
        omega_01_prime=device.omega_01 + chi01,
    )


@dataclass(frozen=True)
class DriveTone:
    """Coupler (qubit) drive: frequency and Rabi amplitude, rad/us."""

    omega: float
    rabi: float


@dataclass(frozen=True)
class ProbeTone:
    """Resonator probe: frequency and Rabi amplitude, rad/us."""

    omega: float
    rabi: float


def reference_device() -> DeviceParams:
    """Measured parameter set of the reference transmon-resonator device."""
    return DeviceParams.from_frequencies(
        omega_r_GHz=7.180,
        omega_01_GHz=7.611,
        g0_MHz=46.57,
        alpha_MHz=-291.4,
        kappa_per_us=3.09,
        gamma1_per_us=1.11,
        gamma_phi_per_us=1.32,
        calib_C=0.562,
    )


def rabi_from_power(power_dbm: float, calib_C: float = 0.562) -> float:
    """Coupler Rabi frequency (rad/us) from drive power in dBm.

    The calibration is Omega_d/2pi [GHz] = C * 10**(P/20), i.e. every +20 dBm
    multiplies the Rabi frequency by ten.
    """
    return calib_C * 10.0 ** (power_dbm / 20.0) * GHZ_TO_ANGULAR


def power_from_rabi(rabi: float, calib_C: float = 0.562) -> float:
    """Inverse of :func:`rabi_from_power`."""
    if rabi <= 0.0:
        raise ValueError("rabi must be positive")
    return 20.0 * math.log10(rabi / GHZ_TO_ANGULAR / calib_C)

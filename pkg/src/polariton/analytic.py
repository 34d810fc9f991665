"""Closed-form polariton transition frequencies and crossing criteria.

All formulas live in the regime where the resonator is probed weakly and
the transmon is driven near its dressed ge transition.  Energies are
angular frequencies in rad/us throughout, matching the rest of the
package.  Helpers accept plain floats so they can be evaluated on grids
without building any operators.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DispersiveValidityWarning, NoCrossing
from .model import DeviceParams, derive_params, power_from_rabi
from .hilbert import HilbertSpec


@dataclass(frozen=True)
class DispersivePolaritonSet:
    """Driven two-level dispersive ladder and its four probe transitions.

    Attributes
    ----------
    h0, h1 : float
        Half-splittings of the zero- and one-photon sectors.
    theta0, theta1 : float
        Mixing angles of the two sectors, in (0, pi).
    w13, w14, w23, w24 : float
        Probe transition frequencies in the lab frame, angular units.
    """

    h0: float
    h1: float
    theta0: float
    theta1: float
    w13: float
    w14: float
    w23: float
    w24: float


@dataclass(frozen=True)
class PerturbedLevels:
    """Sector energies with the leading third-level corrections.

    ``omega0`` holds the unperturbed sector energies, row r giving
    (omega_minus, omega_plus) for the r-photon sector.  ``shift`` holds
    the corresponding second-order corrections from the next transmon
    level, and ``w13``/``w24`` are the corrected inner transition
    frequencies.
    """

    theta: np.ndarray
    omega0: np.ndarray
    shift: np.ndarray
    w13: float
    w24: float


def dispersive_transitions(
    chi: float,
    rabi: float,
    omega_r_tilde: float,
    drive_detuning: float = 0.0,
    low_power: bool = False,
) -> DispersivePolaritonSet:
    """Four probe lines of the driven dispersive two-level model.

    Parameters
    ----------
    chi : float
        Dispersive shift (half the ge pull per photon), angular units.
    rabi : float
        Drive amplitude on the qubit, angular units.
    omega_r_tilde : float
        Mean resonator frequency (omega_r - chi), angular units.
    drive_detuning : float, optional
        Drive offset from the zero-photon dressed ge frequency.  The
        one-photon sector then sits at ``drive_detuning - 2 chi``.
    low_power : bool, optional
        Replace the exact splittings with their rabi-linearized form,
        valid for ``rabi << |chi|`` and resonant drive.

    Returns
    -------
    DispersivePolaritonSet

    Notes
    -----
    The inner pair always straddles ``omega_r_tilde`` symmetrically:
    ``w13 + w24 == w14 + w23 == 2 omega_r_tilde`` holds exactly.
    """
    d0 = float(drive_detuning)
    d1 = d0 - 2.0 * chi
    if low_power:
        if d0 != 0.0:
            raise ValueError("low_power form is defined for resonant drive only")
        h0 = abs(rabi)
        h1 = abs(chi)  # rabi-independent to leading order
        w13 = omega_r_tilde - chi + rabi
        w24 = omega_r_tilde + chi - rabi
        w14 = omega_r_tilde + chi + rabi
        w23 = omega_r_tilde - chi - rabi
    else:
        h0 = np.hypot(0.5 * d0, rabi)
        h1 = np.hypot(0.5 * d1, rabi)
        w13 = omega_r_tilde + h0 - h1
        w14 = omega_r_tilde + h0 + h1
        w23 = omega_r_tilde - h0 - h1
        w24 = omega_r_tilde - h0 + h1
    theta0 = np.arctan2(2.0 * rabi, d0)
    theta1 = np.arctan2(2.0 * rabi, d1)
    return DispersivePolaritonSet(
        h0=float(h0),
        h1=float(h1),
        theta0=float(theta0),
        theta1=float(theta1),
        w13=float(w13),
        w14=float(w14),
        w23=float(w23),
        w24=float(w24),
    )


def perturbed_transitions(
    chi: float,
    rabi: float,
    omega_r_tilde: float,
    alpha: float,
    delta2: tuple[float, float] | None = None,
    closed_form: bool = True,
) -> PerturbedLevels:
    """Inner transition pair with the leading anharmonic repulsion.

    The third transmon level pushes on the dressed doublets of each
    photon sector.  With the drive resonant on the zero-photon ge line
    the sector detunings are 0 and ``-2 chi``, and the repelling level
    sits ``delta2 ~ alpha`` below the doublet center.

    Parameters
    ----------
    chi : float
        Dispersive shift, angular units.  Must be positive in the
        convention used here.
    rabi : float
        Drive amplitude, angular units.
    omega_r_tilde : float
        Mean resonator frequency, angular units.
    alpha : float
        Transmon anharmonicity, angular units, negative.
    delta2 : tuple of float, optional
        Detunings of the repelling level for the two sectors.  Defaults
        to ``(alpha, alpha)``.
    closed_form : bool, optional
        When True (default) use the compact correction
        ``rabi**2 cos(theta1) / alpha`` applied antisymmetrically to the
        inner pair.  When False keep the full sector-resolved
        second-order shifts, useful for testing the reduction.

    Returns
    -------
    PerturbedLevels
    """
    if delta2 is None:
        delta2 = (alpha, alpha)
    d = (0.0, -2.0 * chi)
    theta = np.array([np.arctan2(2.0 * rabi, di) for di in d])
    half = np.array([np.hypot(0.5 * di, rabi) for di in d])
    omega0 = np.stack([0.5 * np.asarray(d) - half, 0.5 * np.asarray(d) + half], axis=1)

    if closed_form:
        corr = rabi**2 * np.cos(theta[1]) / alpha
        shift = np.zeros_like(omega0)
        srt = np.hypot(chi, rabi)
        w13 = omega_r_tilde - (srt - rabi) + corr
        w24 = omega_r_tilde + (srt - rabi) - corr
    else:
        shift = np.empty_like(omega0)
        for r in (0, 1):
            s2 = np.sin(0.5 * theta[r]) ** 2
            c2 = np.cos(0.5 * theta[r]) ** 2
            shift[r, 0] = 2.0 * rabi**2 * s2 / (omega0[r, 0] - delta2[r])
            shift[r, 1] = 2.0 * rabi**2 * c2 / (omega0[r, 1] - delta2[r])
        base1 = omega_r_tilde + chi
        w13 = base1 + (omega0[1, 0] + shift[1, 0]) - (omega0[0, 0] + shift[0, 0])
        w24 = base1 + (omega0[1, 1] + shift[1, 1]) - (omega0[0, 1] + shift[0, 1])
    return PerturbedLevels(
        theta=theta,
        omega0=omega0,
        shift=shift,
        w13=float(w13),
        w24=float(w24),
    )


@dataclass(frozen=True)
class CrossingEstimate:
    """Drive strength at which the inner transition pair meets.

    ``rabi`` solves the full crossing condition; ``rabi_small_chi`` is
    the small-chi estimate ``sqrt(-chi alpha / 2)``.  The dBm fields are
    populated when a calibration constant is supplied.
    """

    rabi: float
    rabi_small_chi: float
    power_dbm: float | None = None
    power_dbm_small_chi: float | None = None


def find_crossing(
    chi: float,
    alpha: float,
    calib_C: float | None = None,
    xtol_rel: float = 1e-12,
) -> CrossingEstimate:
    """Solve for the drive amplitude where w13 meets w24.

    The inner pair separation under the anharmonic correction vanishes
    when ``sin(theta1) + rabi sin(2 theta1) / (2 alpha) = 1``.  The root
    is bracketed in ``(0, |alpha| / 2)``; beyond that the perturbative
    treatment has no validity.

    Parameters
    ----------
    chi : float
        Dispersive shift, angular units, positive.
    alpha : float
        Anharmonicity, angular units, negative.
    calib_C : float, optional
        Drive calibration constant; when given the estimates are also
        expressed as generator powers in dBm.
    xtol_rel : float, optional
        Relative tolerance on the root.

    Raises
    ------
    NoCrossing
        If the crossing condition has no sign change in the bracket.
    """
    if chi <= 0.0:
        raise ValueError(f"chi must be positive, got {chi}")
    if alpha >= 0.0:
        raise ValueError(f"alpha must be negative, got {alpha}")

    def f(rabi: float) -> float:
        r2 = chi**2 + rabi**2
        sin_t1 = rabi / np.sqrt(r2)
        sin_2t1 = -2.0 * rabi * chi / r2
        return sin_t1 + rabi * sin_2t1 / (2.0 * alpha) - 1.0

    hi = 0.5 * abs(alpha)
    lo = 1e-6 * min(chi, hi)
    if f(lo) >= 0.0 or f(hi) <= 0.0:
        raise NoCrossing(
            "inner transition pair does not meet below |alpha| / 2; "
            "the perturbative crossing condition has no root"
        )
    rabi = brentq(f, lo, hi, xtol=xtol_rel * hi, rtol=1e-15)
    small = np.sqrt(-chi * alpha / 2.0)
    if calib_C is None:
        return CrossingEstimate(rabi=float(rabi), rabi_small_chi=float(small))
    return CrossingEstimate(
        rabi=float(rabi),
        rabi_small_chi=float(small),
        power_dbm=power_from_rabi(rabi, calib_C),
        power_dbm_small_chi=power_from_rabi(small, calib_C),
    )


def resolvability_threshold(kappa: float, alpha: float) -> float:
    """Smallest dispersive shift whose crossing is spectrally visible.

    Balancing the linewidth against the inner pair separation at the
    crossing power gives ``chi_min = (kappa sqrt(2 |alpha|))**(2/3)``.
    Inputs and output share any consistent angular unit.
    """
    if kappa <= 0.0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    if alpha >= 0.0:
        raise ValueError(f"alpha must be negative, got {alpha}")
    return float((kappa * np.sqrt(2.0 * abs(alpha))) ** (2.0 / 3.0))


def dispersive_dressed_states(
    device: DeviceParams,
    spec: HilbertSpec,
    n_photons: int,
) -> tuple[np.ndarray, np.ndarray]:
    """First-order dressed basis pair mixing |g, n> with |e, n - 1>.

    Returns the normalized column vectors for the n-photon ground-like
    and excited-like states.  Emits DispersiveValidityWarning when the
    mixing amplitude ``g0 sqrt(n) / delta_0`` reaches 0.3, where the
    first-order form stops being trustworthy.
    """
    if n_photons < 1 or n_photons >= spec.n_resonator:
        raise ValueError(
            f"n_photons must lie in [1, {spec.n_resonator - 1}], got {n_photons}"
        )
    derived = derive_params(device, n_levels=2)
    lam = device.g0 * np.sqrt(n_photons) / derived.delta[0]
    if abs(lam) >= 0.3:
        warnings.warn(
            f"mixing amplitude {abs(lam):.3f} >= 0.3; first-order dressed "
            "states are unreliable at this photon number",
            DispersiveValidityWarning,
            stacklevel=2,
        )
    g_n = spec.basis_state(0, n_photons)
    e_nm1 = spec.basis_state(1, n_photons - 1)
    gbar = (g_n - lam * e_nm1) / np.sqrt(1.0 + lam**2)
    ebar = (e_nm1 + lam * g_n) / np.sqrt(1.0 + lam**2)
    return gbar, ebar


def driven_cavity_photon(delta_r: float, kappa: float, probe_rabi: float) -> float:
    """Steady photon number of a linear cavity under a coherent probe.

    ``delta_r`` is the probe detuning from the cavity, ``kappa`` the
    energy decay rate, ``probe_rabi`` the drive amplitude, all angular.
    """
    return probe_rabi**2 / (delta_r**2 + 0.25 * kappa**2)

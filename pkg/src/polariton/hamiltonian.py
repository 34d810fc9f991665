"""Hamiltonian builders for the driven transmon-resonator system.

All builders work in the rotating-wave approximation and return dense
matrices in the transmon-major product basis. Two distinct rotating frames
appear and must not be conflated:

* coupler frame: every excitation rotates at the drive frequency omega_d;
  the resonator detuning is omega_r - omega_d.
* two-tone interaction picture: the resonator rotates at the probe frequency
  omega_p and the transmon ladder at omega_d; the coupling splits into
  sidebands at exp(+-i * Delta * t) with Delta = omega_p - omega_d.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonHermitianInput
from .hilbert import (
    HilbertSpec,
    embed,
    number,
    resonator_lowering,
    transmon_lowering,
    transmon_projector,
)
from .model import DeviceParams, DriveTone, ProbeTone, derive_params

__all__ = [
    "RotatingFrameHamiltonian",
    "PeriodicHamiltonian",
    "build_lab_jc",
    "build_coupler_frame",
    "build_two_tone",
    "build_multilevel_dispersive",
]

HERMITICITY_TOL = 1e-12


def _require_hermitian(mat: np.ndarray, name: str, tol: float = HERMITICITY_TOL):
    dev = np.max(np.abs(mat - mat.conj().T))
    scale = max(1.0, float(np.max(np.abs(mat))))
    if dev > tol * scale:
        raise NonHermitianInput(f"{name} deviates from Hermiticity by {dev:.3e}")


@dataclass(frozen=True)
class RotatingFrameHamiltonian:
    """Static Hamiltonian plus the frame it lives in.

    ``frame`` is one of "lab", "coupler", "dispersive". Hermiticity is
    validated on construction.
    """

    matrix: np.ndarray
    spec: HilbertSpec
    frame: str
    omega_frame: float = 0.0

    def __post_init__(self):
        if self.matrix.shape != (self.spec.dim, self.spec.dim):
            raise ValueError("matrix shape does not match Hilbert spec")
        _require_hermitian(self.matrix, f"{self.frame}-frame Hamiltonian")


@dataclass(frozen=True)
class PeriodicHamiltonian:
    """Single-harmonic time-periodic Hamiltonian.

    H(t) = h0 + h_plus * exp(i*delta*t) + h_minus * exp(-i*delta*t), with
    h_minus = h_plus^dagger so that H(t) stays Hermitian at all times.
    """

    h0: np.ndarray
    h_plus: np.ndarray
    h_minus: np.ndarray
    delta: float
    spec: HilbertSpec = field(repr=False)

    def __post_init__(self):
        _require_hermitian(self.h0, "h0")
        dev = np.max(np.abs(self.h_minus - self.h_plus.conj().T))
        scale = max(1.0, float(np.max(np.abs(self.h_plus))))
        if dev > HERMITICITY_TOL * scale:
            raise NonHermitianInput(
                f"h_minus is not the adjoint of h_plus (deviation {dev:.3e})"
            )


def _jc_coupling(device: DeviceParams, spec: HilbertSpec) -> np.ndarray:
    a = resonator_lowering(spec)
    b = transmon_lowering(spec)
    return device.g0 * (a.conj().T @ b + a @ b.conj().T)


def _transmon_ladder(device: DeviceParams, spec: HilbertSpec) -> np.ndarray:
    h = np.zeros((spec.dim, spec.dim), dtype=complex)
    for j in range(spec.n_transmon):
        h += device.transmon_level(j) * transmon_projector(spec, j)
    return h


def build_lab_jc(device: DeviceParams, spec: HilbertSpec) -> RotatingFrameHamiltonian:
    """Undriven generalized Jaynes-Cummings Hamiltonian in the lab frame.

    H = omega_r a†a + sum_j omega_j |j><j| + g0 (a†b + a b†).
    """
    n_a = embed(number(spec.n_resonator), "resonator", spec)
    h = device.omega_r * n_a + _transmon_ladder(device, spec) + _jc_coupling(device, spec)
    return RotatingFrameHamiltonian(matrix=h, spec=spec, frame="lab")


def build_coupler_frame(
    device: DeviceParams, spec: HilbertSpec, drive: DriveTone
) -> RotatingFrameHamiltonian:
    """Driven Hamiltonian with all excitations rotating at omega_d.

    H = delta_r a†a + sum_j delta_j |j><j| + g0 (a†b + a b†) + Omega_d (b + b†)
    with delta_r = omega_r - omega_d and delta_j = omega_j - j*omega_d.
    """
    n_a = embed(number(spec.n_resonator), "resonator", spec)
    h = (device.omega_r - drive.omega) * n_a + _jc_coupling(device, spec)
    for j in range(spec.n_transmon):
        det = device.transmon_level(j) - j * drive.omega
        h += det * transmon_projector(spec, j)
    b = transmon_lowering(spec)
    h += drive.rabi * (b + b.conj().T)
    return RotatingFrameHamiltonian(
        matrix=h, spec=spec, frame="coupler", omega_frame=drive.omega
    )


def build_two_tone(
    device: DeviceParams,
    spec: HilbertSpec,
    drive: DriveTone,
    probe: ProbeTone,
) -> PeriodicHamiltonian:
    """Two-tone interaction picture: resonator at omega_p, transmon at omega_d.

    The static part carries both tones and the detunings
    (omega_r - omega_p) a†a + sum_j (omega_j - j*omega_d)|j><j|; the coupling
    becomes time-periodic, g0 a†b e^{i Delta t} + g0 a b† e^{-i Delta t},
    Delta = omega_p - omega_d.
    """
    n_a = embed(number(spec.n_resonator), "resonator", spec)
    a = resonator_lowering(spec)
    b = transmon_lowering(spec)
    h0 = (device.omega_r - probe.omega) * n_a
    for j in range(spec.n_transmon):
        det = device.transmon_level(j) - j * drive.omega
        h0 += det * transmon_projector(spec, j)
    h0 += drive.rabi * (b + b.conj().T)
    h0 += probe.rabi * (a + a.conj().T)
    h_plus = device.g0 * (a.conj().T @ b)
    h_minus = device.g0 * (a @ b.conj().T)
    return PeriodicHamiltonian(
        h0=h0,
        h_plus=h_plus,
        h_minus=h_minus,
        delta=probe.omega - drive.omega,
        spec=spec,
    )


def build_multilevel_dispersive(
    device: DeviceParams, spec: HilbertSpec, drive: DriveTone
) -> RotatingFrameHamiltonian:
    """Effective dispersive model with the full transmon ladder, drive frame.

    In the dressed product basis the resonator pulls each transmon level by
    its chi ladder:

    H = sum_n delta'_n |n><n| + delta_r a†a - chi_01 a†a |0><0|
        + sum_{n>0} (chi_{n-1,n} - chi_{n,n+1}) a†a |n><n| + Omega_d (b + b†)

    with delta'_n = omega_n + chi_{n-1,n} - n*omega_d (Lamb-shifted ladder)
    and delta_r = omega_r - omega_d. The chi values are parameter formulas,
    so the pull of the level just above the truncation is retained; with a
    two-level truncation and Omega_d = 0 this reduces exactly to
    omega_r' a†a + omega_01' sigma_z/2 + chi sigma_z a†a up to a constant.
    """
    derived = derive_params(device, n_levels=spec.n_transmon + 1)
    chi = derived.chi_ladder  # chi_{j,j+1} for j = 0..n_transmon-1
    n_a = embed(number(spec.n_resonator), "resonator", spec)
    h = (device.omega_r - drive.omega) * n_a
    for j in range(spec.n_transmon):
        proj = transmon_projector(spec, j)
        lamb = chi[j - 1] if j > 0 else 0.0
        det = device.transmon_level(j) + lamb - j * drive.omega
        h += det * proj
        if j == 0:
            h += -chi[0] * (n_a @ proj)
        else:
            h += (chi[j - 1] - chi[j]) * (n_a @ proj)
    b = transmon_lowering(spec)
    h += drive.rabi * (b + b.conj().T)
    return RotatingFrameHamiltonian(
        matrix=h, spec=spec, frame="dispersive", omega_frame=drive.omega
    )

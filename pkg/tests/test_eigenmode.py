"""Eigenmode analysis: phases, tracking, labels, and transition tables."""

import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polariton.errors import AmbiguousTracking, AnchorAmbiguous, NonHermitianInput
from polariton.hilbert import HilbertSpec, resonator_lowering
from polariton.model import (
    GHZ_TO_ANGULAR,
    MHZ_TO_ANGULAR,
    DriveTone,
    reference_device,
)
from polariton.hamiltonian import build_coupler_frame, build_lab_jc
from polariton.eigenmode import (
    EigenSolution,
    diagonalize,
    dressed_frequencies,
    polariton_labels,
    track_branches,
    transition_table,
)
from polariton.steadystate import build_liouvillian, solve_static

SPEC = HilbertSpec(4, 4)


def test_diagonalize_rejects_non_hermitian():
    m = np.eye(4, dtype=complex)
    m[0, 1] = 1.0
    with pytest.raises(NonHermitianInput):
        diagonalize(m)


def test_phase_convention_deterministic():
    dev = reference_device()
    ham = build_coupler_frame(dev, SPEC, DriveTone(7.607 * GHZ_TO_ANGULAR, 50.0))
    s1 = diagonalize(ham)
    s2 = diagonalize(ham)
    np.testing.assert_array_equal(s1.states, s2.states)
    for k in range(s1.states.shape[1]):
        col = s1.states[:, k]
        top = col[np.argmax(np.abs(col))]
        assert top.imag == pytest.approx(0.0, abs=1e-14)
        assert top.real > 0.0


def test_eigensolution_validates_orthonormality():
    bad = np.eye(4, dtype=complex)
    bad[:, 1] = bad[:, 0]
    with pytest.raises(ValueError):
        EigenSolution(
            energies=np.arange(4.0), states=bad, spec=None, frame="test"
        )


def test_tracking_follows_fast_diabatic_crossing():
    """Coarse steps across a narrow avoided crossing keep branch character."""
    gap = 1e-4
    # even point count keeps the sample off the exact degeneracy at zero
    sweeps = np.linspace(-1.0, 1.0, 8)
    sols = []
    for s in sweeps:
        h = np.array([[s, gap], [gap, -s]], dtype=complex)
        sols.append(diagonalize(h))
    tracked = track_branches(sols)
    first = tracked[0].states
    last = tracked[-1].states
    # branch 0 starts and ends dominated by the same bare component
    k0 = int(np.argmax(np.abs(first[:, 0])))
    assert np.abs(last[k0, 0]) > 0.99
    # energies of the tracked branches now cross instead of repelling
    e0 = np.array([t.energies[0] for t in tracked])
    assert e0[0] * e0[-1] < 0.0


def test_tracking_warns_on_ambiguous_rotation():
    """A basis rotated so every overlap is below 0.5 cannot be tracked."""
    dim = 5
    fourier = np.exp(
        2j * np.pi * np.outer(np.arange(dim), np.arange(dim)) / dim
    ) / np.sqrt(dim)
    h1 = np.diag(np.arange(dim, dtype=float)).astype(complex)
    h2 = fourier @ h1 @ fourier.conj().T
    sols = [diagonalize(h1), diagonalize(h2)]
    with pytest.warns(AmbiguousTracking):
        track_branches(sols)


def test_polariton_labels_at_weak_drive():
    # drive between the one-photon and zero-photon qubit lines, so the
    # in-pair energy ordering matches the bare characters
    dev = reference_device()
    drive = DriveTone(omega=7.607 * GHZ_TO_ANGULAR, rabi=0.01)
    sol = diagonalize(build_coupler_frame(dev, SPEC, drive))
    labels = polariton_labels(sol, dev, SPEC)
    assert sorted(labels) == ["1p", "2p", "3p", "4p", "5p"]
    dominant = {
        "1p": (0, 0),
        "2p": (1, 0),
        "3p": (1, 1),
        "4p": (0, 1),
        "5p": (2, 0),
    }
    for name, (j, n) in dominant.items():
        amp = np.abs(sol.states[SPEC.index(j, n), labels[name]])
        assert amp > 0.8, f"{name} has |<{j},{n}|state>| = {amp:.3f}"
    assert sol.energies[labels["1p"]] < sol.energies[labels["2p"]]
    assert sol.energies[labels["3p"]] < sol.energies[labels["4p"]]


def test_polariton_labels_reject_strong_drive_anchor():
    dev = reference_device()
    drive = DriveTone(omega=7.6160 * GHZ_TO_ANGULAR, rabi=250.0 * MHZ_TO_ANGULAR)
    sol = diagonalize(build_coupler_frame(dev, SPEC, drive))
    with pytest.raises(AnchorAmbiguous):
        polariton_labels(sol, dev, SPEC)


@settings(max_examples=25, deadline=None)
@given(
    rabi_mhz=st.floats(min_value=0.0, max_value=150.0),
    drive_offset_mhz=st.floats(min_value=-30.0, max_value=30.0),
)
def test_matrix_element_sum_rule(rabi_mhz, drive_offset_mhz):
    """Summing |<b|a_op|a>|^2 over final states gives <a|a+a|a> exactly."""
    dev = reference_device()
    drive = DriveTone(
        omega=(7.607 + drive_offset_mhz / 1e3) * GHZ_TO_ANGULAR,
        rabi=rabi_mhz * MHZ_TO_ANGULAR,
    )
    sol = diagonalize(build_coupler_frame(dev, SPEC, drive))
    a_op = resonator_lowering(SPEC)
    a_eig = sol.states.conj().T @ a_op @ sol.states
    summed = np.sum(np.abs(a_eig) ** 2, axis=0)
    n_diag = np.real(
        np.einsum("ia,ij,ja->a", sol.states.conj(), a_op.conj().T @ a_op, sol.states)
    )
    np.testing.assert_allclose(summed, n_diag, rtol=0.0, atol=1e-10)


def _undriven_table(window=None, rel_threshold=1e-3):
    dev = reference_device()
    spec2 = HilbertSpec(2, 3)
    drive = DriveTone(omega=7.616 * GHZ_TO_ANGULAR, rabi=0.0)
    ham = build_coupler_frame(dev, spec2, drive)
    sol = diagonalize(ham)
    rho = solve_static(build_liouvillian(ham, dev)).rho0
    rows = transition_table(
        sol,
        rho,
        resonator_lowering(spec2),
        drive.omega,
        sweep_value=0.0,
        window=window,
        rel_threshold=rel_threshold,
    )
    return dev, rows


def test_transition_table_recovers_cavity_line():
    """Without drive the dominant probe line lies on the dressed cavity."""
    dev, rows = _undriven_table()
    top = max(rows, key=lambda r: r.intensity)
    mean = 0.5 * (dev.omega_r + dev.omega_01)
    half = np.hypot(0.5 * (dev.omega_01 - dev.omega_r), dev.g0)
    cavity_like = mean - half  # lower dressed single-excitation state
    assert top.frequency == pytest.approx(cavity_like, rel=1e-12)
    assert top.matelem == pytest.approx(1.0, abs=0.05)
    assert top.intensity == pytest.approx(1.0, abs=0.05)


def test_transition_table_window_filters():
    _, rows = _undriven_table(window=(0.0, 1.0))
    assert rows == []


def test_transition_table_threshold_keeps_strongest():
    _, rows = _undriven_table(rel_threshold=1.0)
    assert len(rows) == 1


def test_transition_table_rejects_unnormalized_populations():
    dev = reference_device()
    spec2 = HilbertSpec(2, 3)
    drive = DriveTone(omega=7.616 * GHZ_TO_ANGULAR, rabi=0.0)
    sol = diagonalize(build_coupler_frame(dev, spec2, drive))
    with pytest.raises(ValueError):
        transition_table(
            sol,
            0.5 * np.eye(6, dtype=complex),
            resonator_lowering(spec2),
            drive.omega,
            sweep_value=0.0,
        )


def test_dressed_frequency_identities():
    freqs = dressed_frequencies(reference_device())
    assert freqs["wge_mid"] == pytest.approx(
        0.5 * (freqs["wge0"] + freqs["wge1"]), rel=1e-15
    )
    assert freqs["chi"] == pytest.approx(
        0.5 * (freqs["wge0"] - freqs["wge1"]), rel=1e-15
    )
    assert freqs["wr_tilde"] == pytest.approx(
        0.5 * (freqs["wrg"] + freqs["wre"]), rel=1e-15
    )
    assert freqs["chi"] > 0.0

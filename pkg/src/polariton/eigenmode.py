"""Driven-eigenmode (polariton) analysis.

Diagonalize rotating-frame Hamiltonians along a drive sweep, follow branches
through anticrossings by global overlap assignment, anchor polariton labels
at vanishing drive, and tabulate probe transitions with their intensities.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import AmbiguousTracking, AnchorAmbiguous, NonHermitianInput
from .hamiltonian import RotatingFrameHamiltonian, build_lab_jc
from .hilbert import HilbertSpec
from .model import DeviceParams

__all__ = [
    "EigenSolution",
    "TransitionRow",
    "diagonalize",
    "track_branches",
    "polariton_labels",
    "transition_table",
    "dressed_frequencies",
]

ORTHONORMALITY_TOL = 1e-10
TRACKING_OVERLAP_FLOOR = 0.5
ANCHOR_OVERLAP_FLOOR = 0.5


@dataclass(frozen=True)
class EigenSolution:
    """Eigenvalues and phase-fixed eigenvectors of one Hamiltonian.

    ``states[:, k]`` is the k-th eigenvector. After :func:`track_branches`
    the column order follows physical branches instead of ascending energy.
    """

    energies: np.ndarray
    states: np.ndarray
    spec: HilbertSpec | None = None
    frame: str = "lab"

    def __post_init__(self):
        gram = self.states.conj().T @ self.states
        dev = np.max(np.abs(gram - np.eye(gram.shape[0])))
        if dev > ORTHONORMALITY_TOL:
            raise ValueError(f"eigenvector set not orthonormal (deviation {dev:.3e})")

    @property
    def dim(self) -> int:
        return self.states.shape[0]


def _fix_phases(states: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    out = states.copy()
    for k in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, k])))
        pivot = out[idx, k]
        if np.abs(pivot) > 0.0:
            out[:, k] *= np.conj(pivot) / np.abs(pivot)
    return out


def diagonalize(
    ham: RotatingFrameHamiltonian | np.ndarray,
    spec: HilbertSpec | None = None,
    hermiticity_tol: float = 1e-12,
) -> EigenSolution:
    """Dense Hermitian diagonalization with a deterministic phase convention.

    Raises
    ------
    NonHermitianInput
        If the matrix fails the Hermiticity check (relative max-norm).
    """
    if isinstance(ham, RotatingFrameHamiltonian):
        matrix, spec, frame = ham.matrix, ham.spec, ham.frame
    else:
        matrix = np.asarray(ham, dtype=complex)
        frame = "lab"
    scale = max(1.0, float(np.max(np.abs(matrix))))
    dev = np.max(np.abs(matrix - matrix.conj().T))
    if dev > hermiticity_tol * scale:
        raise NonHermitianInput(f"matrix deviates from Hermiticity by {dev:.3e}")
    energies, states = np.linalg.eigh(matrix)
    return EigenSolution(
        energies=energies, states=_fix_phases(states), spec=spec, frame=frame
    )


def track_branches(solutions: list[EigenSolution]) -> list[EigenSolution]:
    """Reorder eigenvector columns so index k follows one branch of the sweep.

    For consecutive solutions the permutation maximizes the total overlap
    |<v_prev | v_cur>| via a global optimal assignment; greedy matching can
    swap branches at close anticrossings. The first solution keeps its
    ascending-energy order. An :class:`AmbiguousTracking` warning is emitted
    when any matched overlap falls below 0.5.
    """
    if not solutions:
        return []
    tracked = [solutions[0]]
    for sol in solutions[1:]:
        prev = tracked[-1]
        overlap = np.abs(prev.states.conj().T @ sol.states)
        row, col = linear_sum_assignment(-overlap)
        order = np.empty(len(col), dtype=int)
        order[row] = col
        matched = overlap[row, col]
        if np.min(matched) < TRACKING_OVERLAP_FLOOR:
            warnings.warn(
                f"branch tracking overlap dropped to {np.min(matched):.3f}",
                AmbiguousTracking,
            )
        tracked.append(
            EigenSolution(
                energies=sol.energies[order],
                states=sol.states[:, order],
                spec=sol.spec,
                frame=sol.frame,
            )
        )
    return tracked


# Bare characters anchoring the polariton ladder: (transmon level, photons).
_ANCHOR_CHARACTERS = {
    "pair_low": [(0, 0), (1, 0)],  # -> 1p, 2p by ascending energy
    "pair_high": [(1, 1), (0, 1)],  # -> 3p, 4p by ascending energy
    "fifth": [(2, 0)],  # -> 5p
}


def polariton_labels(
    anchor: EigenSolution, device: DeviceParams, spec: HilbertSpec
) -> dict[str, int]:
    """Map labels "1p".."5p" to branch indices of the low-drive anchor.

    The targets are the dressed states of the undriven lab-frame Hamiltonian
    (identified there by dominant bare component, which is unambiguous), and
    the anchor eigenstates are matched to them by global assignment. Within
    the {g0bar, e0bar} and {e1bar, g1bar} pairs the lower-energy branch gets
    the odd label, so at drive resonance (where the anchor states are equal
    mixtures) the labels remain well defined.

    Raises
    ------
    AnchorAmbiguous
        If any matched overlap amplitude falls below 0.5.
    """
    lab = diagonalize(build_lab_jc(device, spec))
    characters = (
        _ANCHOR_CHARACTERS["pair_low"]
        + _ANCHOR_CHARACTERS["pair_high"]
        + _ANCHOR_CHARACTERS["fifth"]
    )
    targets = []
    for j, n in characters:
        weights = np.abs(lab.states[spec.index(j, n), :])
        k = int(np.argmax(weights))
        if weights[k] < ANCHOR_OVERLAP_FLOOR:
            raise AnchorAmbiguous(
                f"no lab eigenstate dominated by |{j},{n}> (best {weights[k]:.3f})"
            )
        targets.append(lab.states[:, k])
    target_mat = np.column_stack(targets)
    overlap = np.abs(target_mat.conj().T @ anchor.states)
    row, col = linear_sum_assignment(-overlap)
    matched = overlap[row, col]
    if np.min(matched) < ANCHOR_OVERLAP_FLOOR:
        raise AnchorAmbiguous(
            f"anchor overlap dropped to {np.min(matched):.3f}; "
            "drive may be too strong for anchoring"
        )
    by_target = {r: c for r, c in zip(row, col)}
    lo = sorted((by_target[0], by_target[1]), key=lambda i: anchor.energies[i])
    hi = sorted((by_target[2], by_target[3]), key=lambda i: anchor.energies[i])
    return {
        "1p": int(lo[0]),
        "2p": int(lo[1]),
        "3p": int(hi[0]),
        "4p": int(hi[1]),
        "5p": int(by_target[4]),
    }


@dataclass(frozen=True)
class TransitionRow:
    """One probe transition at one sweep point."""

    sweep_value: float
    from_label: str
    to_label: str
    frequency: float  # lab frame, rad/us
    matelem: float  # |<alpha| a |beta>|
    intensity: float  # (P_alpha + P_beta) * matelem**2


def transition_table(
    solution: EigenSolution,
    rho_ss: np.ndarray,
    a_op: np.ndarray,
    drive_omega: float,
    sweep_value: float,
    window: tuple[float, float] | None = None,
    labels: dict[str, int] | None = None,
    rel_threshold: float = 1e-3,
) -> list[TransitionRow]:
    """Probe transitions between driven eigenmodes, with intensities.

    Populations are taken from ``rho_ss`` (the coupler-only steady state in
    the same basis as ``solution``); the lab frequency of a transition
    alpha -> beta is omega_d + (E_beta - E_alpha). All ordered pairs are
    considered: the drive frame folds photon-number ladders down by omega_d
    per excitation, so physical absorptions can carry negative frame-energy
    differences. Rows are filtered to the lab-frequency ``window`` and to
    intensities above ``rel_threshold`` relative to the strongest in-window
    line.
    """
    energies, states = solution.energies, solution.states
    pops = np.real(np.einsum("ia,ij,ja->a", states.conj(), rho_ss, states))
    total = float(np.sum(pops))
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"populations sum to {total:.8f}, not 1")
    a_eig = states.conj().T @ a_op @ states
    names = {}
    if labels:
        names = {idx: lab for lab, idx in labels.items()}
    rows = []
    dim = len(energies)
    for alpha in range(dim):
        for beta in range(dim):
            if beta == alpha:
                continue
            freq = drive_omega + (energies[beta] - energies[alpha])
            if window is not None and not (window[0] <= freq <= window[1]):
                continue
            matelem = float(np.abs(a_eig[alpha, beta]))
            intensity = (pops[alpha] + pops[beta]) * matelem**2
            rows.append(
                TransitionRow(
                    sweep_value=sweep_value,
                    from_label=names.get(alpha, f"E{alpha}"),
                    to_label=names.get(beta, f"E{beta}"),
                    frequency=freq,
                    matelem=matelem,
                    intensity=intensity,
                )
            )
    if not rows:
        return rows
    top = max(r.intensity for r in rows)
    if top <= 0.0:
        return []
    return [r for r in rows if r.intensity >= rel_threshold * top]


def dressed_frequencies(
    device: DeviceParams, spec: HilbertSpec | None = None
) -> dict[str, float]:
    """Dressed transition frequencies from exact lab-frame diagonalization.

    Returns a dict with the qubit transitions at zero and one photon
    (``wge0``, ``wge1``), the resonator transitions with the qubit in g/e
    (``wrg``, ``wre``), their midpoints (``wr_tilde``, ``wge_mid``) and the
    measured-convention dispersive shift ``chi = (wge0 - wge1)/2``. All
    angular (rad/us).
    """
    spec = spec or HilbertSpec()
    lab = diagonalize(build_lab_jc(device, spec))

    def dominated(j: int, n: int) -> int:
        weights = np.abs(lab.states[spec.index(j, n), :])
        k = int(np.argmax(weights))
        if weights[k] < ANCHOR_OVERLAP_FLOOR:
            raise AnchorAmbiguous(f"no eigenstate dominated by |{j},{n}>")
        return k

    e_g0 = lab.energies[dominated(0, 0)]
    e_e0 = lab.energies[dominated(1, 0)]
    e_g1 = lab.energies[dominated(0, 1)]
    e_e1 = lab.energies[dominated(1, 1)]
    wge0 = e_e0 - e_g0
    wge1 = e_e1 - e_g1
    wrg = e_g1 - e_g0
    wre = e_e1 - e_e0
    return {
        "wge0": wge0,
        "wge1": wge1,
        "wrg": wrg,
        "wre": wre,
        "wr_tilde": 0.5 * (wrg + wre),
        "wge_mid": 0.5 * (wge0 + wge1),
        "chi": 0.5 * (wge0 - wge1),
    }

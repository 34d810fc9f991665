"""Truncated transmon x resonator Hilbert space and elementary operators.

Basis ordering is transmon-major: the product state |j, n> (transmon level j,
resonator photons n) sits at index j * n_resonator + n. Operators are dense
complex matrices; at the default truncation (4 x 4) the full space is only
16-dimensional and sparsity buys nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch

__all__ = [
    "HilbertSpec",
    "annihilation",
    "number",
    "embed",
    "transmon_lowering",
    "resonator_lowering",
    "transmon_projector",
]


@dataclass(frozen=True)
class HilbertSpec:
    """Truncation of the joint space: levels kept in each subsystem."""

    n_transmon: int = 4
    n_resonator: int = 4

    def __post_init__(self):
        if self.n_transmon < 2 or self.n_resonator < 2:
            raise ValueError("need at least two levels in each subsystem")

    @property
    def dim(self) -> int:
        return self.n_transmon * self.n_resonator

    def index(self, j: int, n: int) -> int:
        """Flat index of |j, n>."""
        if not (0 <= j < self.n_transmon and 0 <= n < self.n_resonator):
            raise IndexError(f"state |{j},{n}> outside truncation")
        return j * self.n_resonator + n

    def levels(self, index: int) -> tuple[int, int]:
        """Inverse of :meth:`index`: (j, n) of a flat basis index."""
        if not 0 <= index < self.dim:
            raise IndexError(f"basis index {index} outside space")
        return divmod(index, self.n_resonator)

    def excitation(self, index: int) -> int:
        """Total excitation number j + n of a bare basis state."""
        j, n = self.levels(index)
        return j + n

    def basis_state(self, j: int, n: int) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        vec[self.index(j, n)] = 1.0
        return vec


def annihilation(dim: int) -> np.ndarray:
    """Truncated ladder operator, <k-1| a |k> = sqrt(k)."""
    if dim < 2:
        raise DimensionMismatch("annihilation needs dim >= 2")
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1).astype(complex)


def number(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def embed(op: np.ndarray, which: str, spec: HilbertSpec) -> np.ndarray:
    """Lift a single-subsystem operator into the product space.

    ``which`` is "transmon" (left kron factor, consistent with transmon-major
    indexing) or "resonator".
    """
    op = np.asarray(op, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise DimensionMismatch(f"operator must be square, got {op.shape}")
    if which == "transmon":
        if op.shape[0] != spec.n_transmon:
            raise DimensionMismatch(
                f"transmon operator is {op.shape[0]}-dim, spec has {spec.n_transmon}"
            )
        return np.kron(op, np.eye(spec.n_resonator, dtype=complex))
    if which == "resonator":
        if op.shape[0] != spec.n_resonator:
            raise DimensionMismatch(
                f"resonator operator is {op.shape[0]}-dim, spec has {spec.n_resonator}"
            )
        return np.kron(np.eye(spec.n_transmon, dtype=complex), op)
    raise ValueError(f"unknown subsystem {which!r}")


def transmon_lowering(spec: HilbertSpec) -> np.ndarray:
    """b embedded in the product space."""
    return embed(annihilation(spec.n_transmon), "transmon", spec)


def resonator_lowering(spec: HilbertSpec) -> np.ndarray:
    """a embedded in the product space."""
    return embed(annihilation(spec.n_resonator), "resonator", spec)


def transmon_projector(spec: HilbertSpec, j: int) -> np.ndarray:
    """|j><j| on the transmon, embedded."""
    proj = np.zeros((spec.n_transmon, spec.n_transmon), dtype=complex)
    proj[j, j] = 1.0
    return embed(proj, "transmon", spec)

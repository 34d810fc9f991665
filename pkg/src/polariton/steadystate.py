"""Lindblad steady states of the driven system, static and time-periodic.

Superoperators use column-stacking vectorization, vec(A X B) = (B^T kron A)
vec(X), as dense complex matrices of size D^2 x D^2 (D = 16 at the default
truncation). The time-periodic Liouvillian has a single harmonic,

    d rho/dt = (L0 + L1 e^{i Delta t} + L-1 e^{-i Delta t}) rho,

and its periodic steady state is obtained by matrix continued fractions:
the one-sided ladders

    S_n = -[(L0 - i n Delta) + L-1 S_{n+1}]^{-1} L1        (n = N..1)
    T_n = -[(L0 - i n Delta) + L1 T_{n-1}]^{-1} L-1        (n = -N..-1)

close the hierarchy onto (L-1 S_1 + L0 + L1 T_-1) rho_0 = 0. The recursion is
kept two-sided so L1 != L-1^dagger is supported; when the generator preserves
Hermiticity (the physical case) the down ladder is the conjugate-permuted up
ladder, T_{-n} = K S_n^* K, and only one ladder is solved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.integrate import solve_ivp

from .errors import (
    DegenerateSteadyState,
    NoConvergence,
    SingularLadderMatrix,
    StepTooLarge,
)
from .hamiltonian import PeriodicHamiltonian, RotatingFrameHamiltonian
from .hilbert import HilbertSpec, resonator_lowering, transmon_lowering
from .model import DeviceParams

__all__ = [
    "LiouvillianTriple",
    "SteadyState",
    "vec",
    "unvec",
    "spre",
    "spost",
    "dissipator",
    "build_liouvillian",
    "solve_static",
    "solve_mcf",
    "time_integrate",
]

TRACE_TOL = 1e-8
HERMITICITY_TOL = 1e-8
PSD_TOL = 1e-8
TRACE_DRIFT_TOL = 1e-6


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return rho.reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    dim = int(round(math.isqrt(v.size)))
    return v.reshape((dim, dim), order="F")


def spre(op: np.ndarray) -> np.ndarray:
    """Superoperator of left multiplication, rho -> op @ rho."""
    dim = op.shape[0]
    return np.kron(np.eye(dim, dtype=complex), op)


def spost(op: np.ndarray) -> np.ndarray:
    """Superoperator of right multiplication, rho -> rho @ op."""
    dim = op.shape[0]
    return np.kron(op.T, np.eye(dim, dtype=complex))


def dissipator(op: np.ndarray) -> np.ndarray:
    """D[A] rho = A rho A† - (A†A rho + rho A†A)/2 as a superoperator."""
    ad_a = op.conj().T @ op
    return np.kron(op.conj(), op) - 0.5 * (spre(ad_a) + spost(ad_a))


def _commutator_superop(h: np.ndarray) -> np.ndarray:
    """-i [H, .] as a superoperator."""
    return -1j * (spre(h) - spost(h))


def _transpose_perm(dim: int) -> np.ndarray:
    """Index permutation p with vec(X.T) = vec(X)[p]."""
    idx = np.arange(dim * dim).reshape((dim, dim), order="F")
    return vec(idx.T)


def _conj_permute(superop: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """K M* K for the transpose permutation K (Hermiticity transform)."""
    return superop.conj()[np.ix_(perm, perm)]


@dataclass(frozen=True)
class LiouvillianTriple:
    """Harmonic decomposition of the time-periodic Liouvillian."""

    l0: np.ndarray
    l1: np.ndarray
    lm1: np.ndarray
    delta: float
    spec: HilbertSpec = field(repr=False)

    @property
    def dim(self) -> int:
        return self.l0.shape[0]

    def hermiticity_symmetric(self, tol: float = 1e-12) -> bool:
        """True when the generator preserves Hermiticity at every instant."""
        perm = _transpose_perm(self.spec.dim)
        scale = max(1.0, float(np.max(np.abs(self.l0))))
        dev0 = np.max(np.abs(self.l0 - _conj_permute(self.l0, perm)))
        dev1 = np.max(np.abs(self.lm1 - _conj_permute(self.l1, perm)))
        return bool(max(dev0, dev1) <= tol * scale)


@dataclass(frozen=True)
class SteadyState:
    """Periodic steady state: DC component, harmonics and photon number.

    ``n_photons`` is Tr[a†a rho_0], which for a time-periodic state equals
    the one-period average of <a†a>(t).
    """

    rho0: np.ndarray
    harmonics: dict[int, np.ndarray]
    n_photons: float
    converged: bool
    n_ladder: int | None = None
    tail: float = 0.0

    def __post_init__(self):
        tr = complex(np.trace(self.rho0))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"steady state trace {tr:.10f} deviates from 1")
        herm = np.max(np.abs(self.rho0 - self.rho0.conj().T))
        if herm > HERMITICITY_TOL:
            raise ValueError(f"steady state non-Hermitian by {herm:.3e}")
        evals = np.linalg.eigvalsh(0.5 * (self.rho0 + self.rho0.conj().T))
        if evals.min() < -PSD_TOL:
            raise ValueError(f"steady state not PSD (lowest eigenvalue {evals.min():.3e})")


def build_liouvillian(
    ham: PeriodicHamiltonian | RotatingFrameHamiltonian,
    device: DeviceParams,
) -> LiouvillianTriple:
    """Assemble L0, L1, L-1 from a Hamiltonian and the device decay rates.

    Dissipation enters the static part only: kappa D[a] on the resonator,
    gamma_1 D[b] and gamma_phi D[b†b] on the transmon. A static Hamiltonian
    produces a triple with vanishing sidebands and delta = 0.
    """
    if isinstance(ham, PeriodicHamiltonian):
        h0, h_plus, h_minus, delta, spec = (
            ham.h0,
            ham.h_plus,
            ham.h_minus,
            ham.delta,
            ham.spec,
        )
    else:
        h0, spec = ham.matrix, ham.spec
        h_plus = h_minus = np.zeros_like(h0)
        delta = 0.0
    a = resonator_lowering(spec)
    b = transmon_lowering(spec)
    l0 = _commutator_superop(h0)
    if device.kappa:
        l0 += device.kappa * dissipator(a)
    if device.gamma_1:
        l0 += device.gamma_1 * dissipator(b)
    if device.gamma_phi:
        l0 += device.gamma_phi * dissipator(b.conj().T @ b)
    return LiouvillianTriple(
        l0=l0,
        l1=_commutator_superop(h_plus),
        lm1=_commutator_superop(h_minus),
        delta=delta,
        spec=spec,
    )


def _photon_number_op(spec: HilbertSpec) -> np.ndarray:
    a = resonator_lowering(spec)
    return a.conj().T @ a


def _finalize_rho(rho: np.ndarray) -> np.ndarray:
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def solve_static(L: LiouvillianTriple, degeneracy_tol: float = 1e-10) -> SteadyState:
    """Nullspace steady state of the time-averaged generator L0 + L1 + L-1.

    Raises
    ------
    DegenerateSteadyState
        If the numerical nullspace has dimension greater than one (second
        singular value below ``degeneracy_tol`` relative to the largest).
    """
    gen = L.l0 + L.l1 + L.lm1
    _, svals, vh = np.linalg.svd(gen)
    if svals[-2] <= degeneracy_tol * svals[0]:
        raise DegenerateSteadyState(
            f"nullspace dimension > 1 (sigma_2/sigma_1 = {svals[-2] / svals[0]:.3e})"
        )
    rho = unvec(vh[-1].conj())
    tr = complex(np.trace(rho))
    if abs(tr) < 1e-12:
        raise DegenerateSteadyState("nullspace vector is traceless")
    rho = _finalize_rho(rho / tr)
    n_op = _photon_number_op(L.spec)
    return SteadyState(
        rho0=rho,
        harmonics={},
        n_photons=float(np.trace(n_op @ rho).real),
        converged=True,
        n_ladder=None,
    )


def _ladder_pass(
    l0: np.ndarray,
    feed_sparse: sp.csr_matrix,
    rhs_dense: np.ndarray,
    delta: float,
    n_rungs: int,
    sign: int,
    n_keep: int,
) -> tuple[np.ndarray, list[np.ndarray]]:
    """One continued-fraction ladder, top rung down to |n| = 1.

    ``sign`` +1 computes S_n (rungs n = N..1, feed L-1, rhs L1); -1 computes
    T_n (rungs n = -N..-1, feed L1, rhs L-1). Returns the feed product at the
    innermost rung (L-1 S_1 or L1 T_-1) and the ``n_keep`` innermost ladder
    matrices for harmonic reconstruction.
    """
    dim = l0.shape[0]
    diag = np.arange(dim)
    feed = np.zeros_like(l0)
    kept: list[np.ndarray] = []
    for rung in range(n_rungs, 0, -1):
        n = sign * rung
        mat = l0 + feed
        mat[diag, diag] -= 1j * n * delta
        lu, piv = sla.lu_factor(mat, overwrite_a=True, check_finite=False)
        ladder = -sla.lu_solve((lu, piv), rhs_dense, check_finite=False)
        if not np.all(np.isfinite(ladder)):
            raise SingularLadderMatrix(f"ladder matrix singular at n = {n}")
        if rung <= n_keep:
            kept.append(ladder)
        feed = feed_sparse @ ladder
    kept.reverse()  # innermost first: S_1, S_2, ...
    return feed, kept


def _closure_solve(closure: np.ndarray) -> np.ndarray:
    """Solve closure @ rho0 = 0 with unit trace, dense LU with trace row."""
    dim2 = closure.shape[0]
    dim = int(round(math.isqrt(dim2)))
    mat = closure.copy()
    trace_row = np.zeros(dim2, dtype=complex)
    trace_row[(dim + 1) * np.arange(dim)] = 1.0
    mat[0, :] = trace_row
    rhs = np.zeros(dim2, dtype=complex)
    rhs[0] = 1.0
    sol = sla.lu_solve(
        sla.lu_factor(mat, overwrite_a=True, check_finite=False),
        rhs,
        check_finite=False,
    )
    if not np.all(np.isfinite(sol)):
        raise SingularLadderMatrix("closure matrix singular")
    return unvec(sol)


def _mcf_at_order(
    L: LiouvillianTriple,
    n_rungs: int,
    symmetric: bool,
    perm: np.ndarray,
    n_harmonics: int,
) -> tuple[np.ndarray, dict[int, np.ndarray]]:
    """Solve the closed hierarchy at fixed ladder depth."""
    l1_sp = sp.csr_matrix(L.l1)
    lm1_sp = sp.csr_matrix(L.lm1)
    keep = max(n_harmonics, 1)
    feed_up, s_kept = _ladder_pass(
        L.l0, lm1_sp, L.l1, L.delta, n_rungs, sign=+1, n_keep=keep
    )
    if symmetric:
        t_inner = _conj_permute(s_kept[0], perm)
        feed_down = l1_sp @ t_inner
        t_kept = None
    else:
        feed_down, t_kept = _ladder_pass(
            L.l0, l1_sp, L.lm1, L.delta, n_rungs, sign=-1, n_keep=keep
        )
    closure = L.l0 + feed_up + feed_down
    rho0 = _closure_solve(closure)
    harmonics: dict[int, np.ndarray] = {}
    if n_harmonics > 0:
        prev = vec(rho0)
        for k in range(1, n_harmonics + 1):
            prev = s_kept[k - 1] @ prev
            harmonics[k] = unvec(prev)
        if symmetric:
            for k in range(1, n_harmonics + 1):
                harmonics[-k] = harmonics[k].conj().T
        else:
            prev = vec(rho0)
            for k in range(1, n_harmonics + 1):
                prev = t_kept[k - 1] @ prev
                harmonics[-k] = unvec(prev)
    return rho0, harmonics


def solve_mcf(
    L: LiouvillianTriple,
    tol: float = 1e-8,
    n_start: int = 8,
    n_max: int = 128,
    n_harmonics: int = 1,
) -> SteadyState:
    """Periodic steady state by matrix continued fractions.

    The ladder depth starts at ``n_start`` and doubles until the DC component
    stabilizes, ||rho0(N) - rho0(2N)||_max < tol; the 2N solution is returned
    with the achieved tail. With ``delta == 0`` the problem is static and is
    delegated to :func:`solve_static` on L0 + L1 + L-1.

    Raises
    ------
    NoConvergence
        If the tail test still fails at ``n_max``.
    SingularLadderMatrix
        If any ladder or closure matrix is numerically singular.
    """
    if L.delta == 0.0:
        return solve_static(L)
    if n_max < 2 * n_start:
        raise ValueError("n_max must allow at least one doubling of n_start")
    perm = _transpose_perm(L.spec.dim)
    symmetric = L.hermiticity_symmetric()
    n_rungs = n_start
    rho_prev, _ = _mcf_at_order(L, n_rungs, symmetric, perm, n_harmonics=0)
    while 2 * n_rungs <= n_max:
        n_rungs *= 2
        rho_new, harmonics = _mcf_at_order(L, n_rungs, symmetric, perm, n_harmonics)
        tail = float(np.max(np.abs(rho_new - rho_prev)))
        if tail < tol:
            rho0 = _finalize_rho(rho_new)
            n_op = _photon_number_op(L.spec)
            return SteadyState(
                rho0=rho0,
                harmonics=harmonics,
                n_photons=float(np.trace(n_op @ rho0).real),
                converged=True,
                n_ladder=n_rungs,
                tail=tail,
            )
        rho_prev = rho_new
    raise NoConvergence(
        f"continued fraction tail {tail:.3e} above {tol:.1e} at N = {n_rungs}"
    )


def _periodic_rhs_factory(L: LiouvillianTriple):
    l1_sp = sp.csr_matrix(L.l1)
    lm1_sp = sp.csr_matrix(L.lm1)
    l0 = L.l0
    delta = L.delta

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        phase = np.exp(1j * delta * t)
        return l0 @ y + phase * (l1_sp @ y) + np.conj(phase) * (lm1_sp @ y)

    return rhs


def _propagator_rhs_factory(L: LiouvillianTriple):
    l1_sp = sp.csr_matrix(L.l1)
    lm1_sp = sp.csr_matrix(L.lm1)
    l0 = L.l0
    delta = L.delta
    dim = l0.shape[0]

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        prop = y.reshape(dim, dim)
        phase = np.exp(1j * delta * t)
        out = l0 @ prop
        out += phase * (l1_sp @ prop)
        out += np.conj(phase) * (lm1_sp @ prop)
        return out.reshape(-1)

    return rhs


def _initial_state(spec: HilbertSpec) -> np.ndarray:
    rho = np.zeros((spec.dim, spec.dim), dtype=complex)
    rho[spec.index(0, 0), spec.index(0, 0)] = 1.0
    return rho


def _period_average(
    L: LiouvillianTriple, rho_start: np.ndarray, t0: float, period: float, rtol: float
) -> tuple[np.ndarray, float]:
    """One-period mean of rho and <a†a> from a densely-output integration.

    Equal-weight sampling over a full period is the periodic trapezoid rule,
    spectrally accurate for the smooth periodic steady state.
    """
    rhs = _periodic_rhs_factory(L)
    sol = solve_ivp(
        rhs,
        (t0, t0 + period),
        vec(rho_start),
        method="DOP853",
        rtol=rtol,
        atol=1e-14,
        dense_output=True,
    )
    if not sol.success:
        raise StepTooLarge(f"period-average integration failed: {sol.message}")
    n_samples = 128
    times = t0 + period * np.arange(n_samples) / n_samples
    samples = sol.sol(times)  # (dim^2, n_samples)
    rho_mean = unvec(samples.mean(axis=1))
    n_op = _photon_number_op(L.spec)
    n_vec = vec(n_op.conj().T).conj()  # Tr[n rho] = <vec(n†), vec(rho)>
    n_mean = float(np.real(n_vec @ samples).mean())
    return rho_mean, n_mean


def time_integrate(
    L: LiouvillianTriple,
    t_final: float,
    dt: float | None = None,
    method: str = "floquet",
    rtol: float = 1e-11,
) -> SteadyState:
    """Oracle: integrate the explicit time-dependent master equation.

    Starts from rho(0) = |g,0><g,0| and reports the one-period time average
    of <a†a> over the last period 2*pi/|Delta|. Two modes:

    * "floquet": integrate the one-period propagator P with an adaptive
      explicit pair (DOP853), advance to t_final by exact square-and-multiply
      composition (the equation is linear), then average one final period.
    * "direct": literal adaptive stepping over [0, t_final]; cost grows with
      t_final and drive power, intended for cross-checks on cheap points.

    Independent of the continued-fraction route by construction.

    Raises
    ------
    StepTooLarge
        If the trace drifts by more than 1e-6 along the way.
    """
    if L.delta == 0.0:
        rho_t = _static_integrate(L, t_final, rtol)
        n_op = _photon_number_op(L.spec)
        rho_t = _finalize_rho(rho_t)
        return SteadyState(
            rho0=rho_t,
            harmonics={},
            n_photons=float(np.trace(n_op @ rho_t).real),
            converged=True,
        )
    period = 2.0 * math.pi / abs(L.delta)
    n_periods = max(1, math.ceil(t_final / period))
    rho_init = _initial_state(L.spec)

    if method == "direct":
        rhs = _periodic_rhs_factory(L)
        t_end = n_periods * period
        sol = solve_ivp(
            rhs,
            (0.0, t_end),
            vec(rho_init),
            method="DOP853",
            rtol=rtol,
            atol=1e-14,
            max_step=dt if dt is not None else np.inf,
        )
        if not sol.success:
            raise StepTooLarge(f"integration failed: {sol.message}")
        rho_end = unvec(sol.y[:, -1])
    elif method == "floquet":
        rhs = _propagator_rhs_factory(L)
        dim2 = L.l0.shape[0]
        eye = np.eye(dim2, dtype=complex)
        sol = solve_ivp(
            rhs,
            (0.0, period),
            eye.reshape(-1),
            method="DOP853",
            rtol=rtol,
            atol=1e-13,
            max_step=dt if dt is not None else np.inf,
        )
        if not sol.success:
            raise StepTooLarge(f"propagator integration failed: {sol.message}")
        prop = sol.y[:, -1].reshape(dim2, dim2)
        state = vec(rho_init)
        power = prop
        m = n_periods
        while m:
            if m & 1:
                state = power @ state
            m >>= 1
            if m:
                power = power @ power
        rho_end = unvec(state)
    else:
        raise ValueError(f"unknown method {method!r}")

    drift = abs(np.trace(rho_end).real - 1.0) + abs(np.trace(rho_end).imag)
    if drift > TRACE_DRIFT_TOL:
        raise StepTooLarge(f"trace drifted by {drift:.3e} over {n_periods} periods")
    # phase of the generator at t = n_periods * period equals the phase at 0
    rho_mean, n_mean = _period_average(L, rho_end, 0.0, period, rtol=max(rtol, 1e-12))
    rho_mean = _finalize_rho(rho_mean)
    return SteadyState(
        rho0=rho_mean,
        harmonics={},
        n_photons=n_mean,
        converged=True,
    )


def _static_integrate(L: LiouvillianTriple, t_final: float, rtol: float) -> np.ndarray:
    gen = L.l0 + L.l1 + L.lm1

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        return gen @ y

    sol = solve_ivp(
        rhs,
        (0.0, t_final),
        vec(_initial_state(L.spec)),
        method="DOP853",
        rtol=rtol,
        atol=1e-14,
    )
    if not sol.success:
        raise StepTooLarge(f"integration failed: {sol.message}")
    return unvec(sol.y[:, -1])

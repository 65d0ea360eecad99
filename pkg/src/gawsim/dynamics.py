"""Time evolution and entanglement measures.

Two routes from coefficients to dynamics:

1.  Full Lindblad master equation on the density matrix,

        drho/dt = -i[H, rho] + sum_j G_j D[sm_j] rho
                  + sum_{j<k} Gc_jk [ (sm_j rho sp_k - {sp_k sm_j, rho}/2) + h.c. ]

    integrated with fixed-step classical fourth-order Runge-Kutta.  The
    generator is linear and time independent, so one RK4 step is the fixed
    polynomial I + A + A^2/2 + A^3/6 + A^4/24 in A = dt * (superoperator);
    for small systems the step is applied as a single matrix-vector product,
    which is arithmetically the same scheme.  Trace and Hermiticity are
    checked every step, the spectrum every ``positivity_every`` steps
    (eigendecompositions dominate the cost otherwise; drift between samples
    is bounded by the per-step checks).

2.  The single-excitation sector of two atoms, where removing the jump
    terms leaves a non-Hermitian 2x2 effective Hamiltonian acting on the
    amplitude pair (c_eg, c_ge).  ``evolve_amplitudes`` solves it exactly
    by eigendecomposition, with a first-order degenerate branch at
    exceptional points where the two complex eigenvalues coincide.

For a state with no double-excitation population the two routes agree: the
Wootters concurrence of the mixed state reduces to twice the magnitude of
the single coherence, which is exactly 2 |c_eg c_ge*|.

Basis ordering for two atoms is {|ee>, |eg>, |ge>, |gg>}; times and rates
are dimensionless (units of the reference rate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import slh
from .coefficients import MasterEqCoefficients
from .errors import NumericalFailure
from .model import MAX_ATOMS_DENSE

TRACE_TOL = 1e-9
HERM_TOL = 1e-10
EIG_FLOOR = -1e-8
NORM_TOL = 1e-9

#: Largest Hilbert-space dimension for which the RK4 step is precompiled
#: into a dense one-step superoperator (dim**2 x dim**2 matrix).
_SUPEROP_DIM_CAP = 32


@dataclass(frozen=True)
class AmplitudeState:
    """Single-excitation amplitudes (c_eg, c_ge) of a two-atom system."""

    c_eg: complex
    c_ge: complex

    def norm(self) -> float:
        return math.sqrt(abs(self.c_eg) ** 2 + abs(self.c_ge) ** 2)


@dataclass(frozen=True)
class TrajectoryRecord:
    """Stored time series of states and concurrence.

    ``states`` is (T, 2) complex for amplitude evolution or (T, d, d) for
    density-matrix evolution.  ``concurrence`` is None when the system is
    not a two-atom one.
    """

    times: np.ndarray
    states: np.ndarray
    concurrence: np.ndarray | None
    kind: str = "amplitudes"

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have equal length")
        if self.concurrence is not None and len(self.concurrence) != len(self.times):
            raise ValueError("concurrence must match times in length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")


def ground_state_density(n_atoms: int = 2) -> np.ndarray:
    dim = 2 ** n_atoms
    rho = np.zeros((dim, dim), dtype=complex)
    rho[-1, -1] = 1.0
    return rho


def density_from_amplitudes(state: AmplitudeState) -> np.ndarray:
    """Pure two-atom density matrix for a single-excitation state."""
    psi = np.array([0.0, state.c_eg, state.c_ge, 0.0], dtype=complex)
    return np.outer(psi, psi.conj())


def validate_density_matrix(rho: np.ndarray) -> None:
    """Check trace, Hermiticity and spectral floor; raise on violation."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got {rho.shape}")
    if abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise NumericalFailure(f"trace deviates from 1 by {abs(np.trace(rho) - 1.0):.3e}")
    if np.abs(rho - rho.conj().T).max() > HERM_TOL:
        raise NumericalFailure("density matrix is not Hermitian")
    lo = float(np.linalg.eigvalsh(rho).min())
    if lo < EIG_FLOOR:
        raise NumericalFailure(f"density matrix eigenvalue {lo:.3e} below floor")


def _check_decay_physical(coeffs: MasterEqCoefficients) -> None:
    mat = coeffs.decay_matrix()
    scale = max(1.0, float(np.abs(mat).max()))
    lo = float(np.linalg.eigvalsh(mat).min())
    if lo < -1e-9 * scale:
        raise NumericalFailure(f"decay matrix eigenvalue {lo:.3e} is negative (unphysical)")


def hamiltonian_matrix(coeffs: MasterEqCoefficients) -> np.ndarray:
    """Coherent (Lamb shift + exchange) Hamiltonian on the 2**M space."""
    m = coeffs.n_atoms
    dim = 2 ** m
    h = np.zeros((dim, dim), dtype=complex)
    for j in range(m):
        h += coeffs.lamb_shifts[j] * slh.number_op(j, m)
        for k in range(j + 1, m):
            if coeffs.exchange[j, k] != 0.0:
                h += coeffs.exchange[j, k] * (
                    slh.sigma_plus(k, m) @ slh.sigma_minus(j, m)
                    + slh.sigma_plus(j, m) @ slh.sigma_minus(k, m)
                )
    return h


def _drift_operator(coeffs: MasterEqCoefficients) -> np.ndarray:
    """K = -iH - (1/2) sum_jk decay_jk sp_k sm_j; rhs = K rho + rho K^dag + jumps."""
    m = coeffs.n_atoms
    k_op = -1j * hamiltonian_matrix(coeffs)
    dec = coeffs.decay_matrix()
    for j in range(m):
        for k in range(m):
            if dec[j, k] != 0.0:
                k_op -= 0.5 * dec[j, k] * (slh.sigma_plus(k, m) @ slh.sigma_minus(j, m))
    return k_op


def lindblad_rhs(rho: np.ndarray, coeffs: MasterEqCoefficients) -> np.ndarray:
    """Right-hand side drho/dt of the master equation.

    Trace of the result is zero up to roundoff.  Raises on an unphysical
    decay matrix (negative eigenvalue beyond tolerance).
    """
    _check_decay_physical(coeffs)
    m = coeffs.n_atoms
    if rho.shape != (2 ** m, 2 ** m):
        raise ValueError(f"rho shape {rho.shape} does not match {m} atoms")
    k_op = _drift_operator(coeffs)
    out = k_op @ rho + rho @ k_op.conj().T
    dec = coeffs.decay_matrix()
    for j in range(m):
        for k in range(m):
            if dec[j, k] != 0.0:
                out += dec[j, k] * (slh.sigma_minus(j, m) @ rho @ slh.sigma_plus(k, m))
    return out


def _superoperator(coeffs: MasterEqCoefficients) -> np.ndarray:
    """Matrix of the generator acting on row-major vec(rho)."""
    m = coeffs.n_atoms
    dim = 2 ** m
    eye = np.eye(dim, dtype=complex)
    k_op = _drift_operator(coeffs)
    sup = np.kron(k_op, eye) + np.kron(eye, k_op.conj())
    dec = coeffs.decay_matrix()
    for j in range(m):
        for k in range(m):
            if dec[j, k] != 0.0:
                sup += dec[j, k] * np.kron(slh.sigma_minus(j, m), slh.sigma_minus(k, m).conj())
    return sup


def recommended_timestep(coeffs: MasterEqCoefficients, gamma: float = 1.0) -> float:
    """Default RK4 step: 1e-3 over the largest rate present."""
    fastest = max(
        float(np.sum(np.abs(coeffs.individual_decay))),
        coeffs.max_abs_exchange(),
        float(np.abs(coeffs.lamb_shifts).max()),
        gamma,
    )
    return 1e-3 / fastest


def evolve_lindblad(
    rho0: np.ndarray,
    coeffs: MasterEqCoefficients,
    t_max: float,
    dt: float,
    store_every: int | None = None,
    positivity_every: int = 100,
) -> TrajectoryRecord:
    """Integrate the master equation with fixed-step RK4.

    Parameters
    ----------
    rho0 : (d, d) ndarray
        Initial density matrix (validated).
    coeffs : MasterEqCoefficients
        Interaction-picture coefficients; decay matrix must be physical.
    t_max, dt : float
        Horizon and step, in units of 1/gamma.
    store_every : int, optional
        Keep every n-th step (plus t = 0 and the final step).  Default
        keeps at most ~2000 interior snapshots.
    positivity_every : int
        Spectrum check cadence in steps.

    Returns
    -------
    TrajectoryRecord
        Stored density matrices and (for two atoms) Wootters concurrence.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    _check_decay_physical(coeffs)
    validate_density_matrix(rho0)
    m = coeffs.n_atoms
    if m > MAX_ATOMS_DENSE:
        raise ValueError(f"density-matrix evolution accepts at most {MAX_ATOMS_DENSE} atoms, got {m}")
    dim = 2 ** m
    if rho0.shape != (dim, dim):
        raise ValueError(f"rho0 shape {rho0.shape} does not match {m} atoms")

    # fixed-step grid; never steps past t_max (final time may fall short of
    # t_max when it is not a multiple of dt)
    n_steps = int(math.floor(t_max / dt + 1e-9))
    if store_every is None:
        store_every = max(1, n_steps // 2000)

    use_superop = dim <= _SUPEROP_DIM_CAP
    if use_superop:
        a = dt * _superoperator(coeffs)
        step = np.eye(dim * dim, dtype=complex)
        power = np.eye(dim * dim, dtype=complex)
        for order in range(1, 5):
            power = power @ a / order
            step = step + power
        vec = rho0.astype(complex).reshape(-1)
    else:
        k_op = _drift_operator(coeffs)
        dec = coeffs.decay_matrix()
        jumps = [
            (dec[j, k], slh.sigma_minus(j, m), slh.sigma_plus(k, m))
            for j in range(m)
            for k in range(m)
            if dec[j, k] != 0.0
        ]

        def rhs(r):
            out = k_op @ r + r @ k_op.conj().T
            for w, lo, hi in jumps:
                out += w * (lo @ r @ hi)
            return out

        rho = rho0.astype(complex)

    times = [0.0]
    stored = [rho0.astype(complex).copy()]
    for i in range(1, n_steps + 1):
        if use_superop:
            vec = step @ vec
            rho = vec.reshape(dim, dim)
        else:
            k1 = rhs(rho)
            k2 = rhs(rho + 0.5 * dt * k1)
            k3 = rhs(rho + 0.5 * dt * k2)
            k4 = rhs(rho + dt * k3)
            rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

        tr_err = abs(np.trace(rho) - 1.0)
        if tr_err > TRACE_TOL:
            raise NumericalFailure(f"trace drifted by {tr_err:.3e} at step {i}")
        herm_err = float(np.abs(rho - rho.conj().T).max())
        if herm_err > HERM_TOL:
            raise NumericalFailure(f"Hermiticity residue {herm_err:.3e} at step {i}")
        if positivity_every and i % positivity_every == 0:
            lo = float(np.linalg.eigvalsh(rho).min())
            if lo < EIG_FLOOR:
                raise NumericalFailure(f"eigenvalue {lo:.3e} below floor at step {i}")

        if i % store_every == 0 or i == n_steps:
            times.append(i * dt)
            stored.append(rho.copy())

    states = np.array(stored)
    conc = None
    if m == 2:
        conc = np.array([wootters_concurrence(r) for r in states])
    return TrajectoryRecord(np.array(times), states, conc, kind="density")


def effective_hamiltonian(coeffs: MasterEqCoefficients) -> np.ndarray:
    """Non-Hermitian 2x2 generator on the {|eg>, |ge>} block.

    Diagonal dw_j - i G_j / 2, off-diagonal g - i Gc / 2.  Dropping the
    jump terms is exact for concurrence as long as the |ee> population
    stays zero.
    """
    if coeffs.n_atoms != 2:
        raise ValueError("effective Hamiltonian is defined for exactly two atoms")
    dwa, dwb = coeffs.lamb_shifts
    ga, gb = coeffs.individual_decay
    g = coeffs.exchange[0, 1]
    gc = coeffs.collective_decay[0, 1]
    return np.array(
        [[dwa - 0.5j * ga, g - 0.5j * gc], [g - 0.5j * gc, dwb - 0.5j * gb]], dtype=complex
    )


def _amplitude_solution(
    initial: AmplitudeState, coeffs: MasterEqCoefficients, times: np.ndarray
) -> np.ndarray:
    """Exact amplitudes at the given times, shape (T, 2).

    The 2x2 generator splits as mbar * I + N with N traceless; with
    s = sqrt(-det N) (so N @ N = s**2 * I) the propagator is
        exp(-i H t) = e^{-i mbar t} (cos(s t) I - i sin(s t)/s * N).
    cos and sin/s are even in s, so the square-root branch is irrelevant.
    At an exceptional point (s = 0, N nilpotent) sin(s t)/s -> t, the
    first-order form in the defective direction.
    """
    h = effective_hamiltonian(coeffs)
    mbar = 0.5 * (h[0, 0] + h[1, 1])
    d = 0.5 * (h[0, 0] - h[1, 1])
    o = h[0, 1]
    s = np.sqrt(d * d + o * o)
    times = np.asarray(times, dtype=float)
    c0 = np.array([initial.c_eg, initial.c_ge], dtype=complex)
    n_c0 = np.array([d * c0[0] + o * c0[1], o * c0[0] - d * c0[1]])
    out = np.empty((len(times), 2), dtype=complex)

    # cos/sinc form: exact through the exceptional point, but its two pieces
    # grow like e^{|Im s| t} before cancelling, so keep it to moderate |s t|
    near = np.abs(s) * times < 50.0
    t_near = times[near]
    st = s * t_near
    sinc = t_near.astype(complex) if s == 0 else np.sin(st) / s
    phase = np.exp(-1j * mbar * t_near)
    out[near, 0] = phase * (np.cos(st) * c0[0] - 1j * sinc * n_c0[0])
    out[near, 1] = phase * (np.cos(st) * c0[1] - 1j * sinc * n_c0[1])

    # eigen form: each mode factor is bounded by 1 for a dissipative
    # generator; |s| is large enough here for N/s to be well conditioned
    far = ~near
    if far.any():
        t_far = times[far]
        e_minus = np.exp(-1j * (mbar - s) * t_far)
        e_plus = np.exp(-1j * (mbar + s) * t_far)
        for idx in (0, 1):
            out[far, idx] = 0.5 * (
                e_minus * (c0[idx] - n_c0[idx] / s) + e_plus * (c0[idx] + n_c0[idx] / s)
            )
    return out


def evolve_amplitudes(
    initial: AmplitudeState, coeffs: MasterEqCoefficients, t: float
) -> AmplitudeState:
    """Propagate the single-excitation amplitudes to time t (exact)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if initial.norm() > 1.0 + NORM_TOL:
        raise ValueError(f"initial amplitude norm {initial.norm()} exceeds 1")
    _check_decay_physical(coeffs)
    c = _amplitude_solution(initial, coeffs, np.array([t]))[0]
    return AmplitudeState(complex(c[0]), complex(c[1]))


def amplitude_trajectory(
    initial: AmplitudeState, coeffs: MasterEqCoefficients, times
) -> TrajectoryRecord:
    """Exact amplitude time series with concurrence at each time."""
    times = np.asarray(times, dtype=float)
    if times[0] < 0:
        raise ValueError("times must be nonnegative")
    if initial.norm() > 1.0 + NORM_TOL:
        raise ValueError(f"initial amplitude norm {initial.norm()} exceeds 1")
    _check_decay_physical(coeffs)
    states = _amplitude_solution(initial, coeffs, times)
    conc = 2.0 * np.abs(states[:, 0] * states[:, 1].conj())
    return TrajectoryRecord(times, states, conc, kind="amplitudes")


def concurrence_from_amplitudes(state: AmplitudeState) -> float:
    """C = 2 |c_eg c_ge*| for a single-excitation two-atom state."""
    return 2.0 * abs(state.c_eg * state.c_ge.conjugate())


_SY_SY = np.kron(
    np.array([[0.0, -1.0j], [1.0j, 0.0]]), np.array([[0.0, -1.0j], [1.0j, 0.0]])
)


def wootters_concurrence(rho: np.ndarray) -> float:
    """Concurrence of an arbitrary two-qubit density matrix.

    C = max(0, l1 - l2 - l3 - l4) where l_i are the decreasingly sorted
    square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
    """
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"need a 4x4 two-qubit density matrix, got {rho.shape}")
    rho_tilde = rho @ _SY_SY @ rho.conj() @ _SY_SY
    evals = np.linalg.eigvals(rho_tilde).real
    # eigenvalues are nonnegative up to roundoff; rank-deficient inputs leave
    # eps-size debris that the square root would blow up to sqrt(eps)
    evals = np.clip(evals, 0.0, None)
    evals[evals < 1e-12 * evals.max(initial=0.0)] = 0.0
    lam = np.sqrt(evals)
    lam.sort()
    return float(max(0.0, lam[3] - lam[2] - lam[1] - lam[0]))

"""Master-equation coefficients for giant atoms near a mirror.

In the interaction picture the reduced atomic dynamics is governed by four
families of coefficients, all evaluated at the resonant wavevector:

    dw_j    Lamb shift of atom j
    g_jk    coherent exchange coupling between atoms j and k
    G_j     individual decay rate of atom j
    Gc_jk   collective (two-atom) decay rate

Each is a double sum over connection-point pairs with two phase arguments
per pair: the direct separation |phi_n - phi_m| and the mirror round trip
phi_n + phi_m.  Shift and exchange terms carry sin, decay terms carry cos,
and the sums include the n = m diagonal (which contributes the constant and
the cos(2*phi) mirror term to G_j).

Everything is computed in real arithmetic from the sin/cos form; no complex
intermediates, hence no spurious imaginary residue.  Rates are in units of
the reference rate, so results scale linearly with gamma.

``general_coefficients`` handles any layout; the ``closed_form_*`` functions
are the trigonometric polynomials for the three canonical two-atom setups
and stay well defined at theta = 0, where an explicit layout would have
coincident points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import CanonicalConfig, Configuration, WaveguideLayout, canonical_atom_order

#: Below this (times gamma), a decay coefficient is treated as exactly zero
#: by downstream consumers; trig polynomials evaluated in double precision
#: do not land closer to their roots than this.
ZERO_DECAY_TOL = 1e-9


@dataclass(frozen=True)
class MasterEqCoefficients:
    """Interaction-picture coefficient set for an M-atom layout.

    Attributes
    ----------
    lamb_shifts : (M,) ndarray
        Frequency shifts dw_j.
    exchange : (M, M) ndarray
        Symmetric exchange couplings g_jk, zero diagonal.
    individual_decay : (M,) ndarray
        Individual decay rates G_j.
    collective_decay : (M, M) ndarray
        Symmetric collective decay rates Gc_jk, zero diagonal.
    """

    lamb_shifts: np.ndarray
    exchange: np.ndarray
    individual_decay: np.ndarray
    collective_decay: np.ndarray

    def __post_init__(self):
        m = len(self.lamb_shifts)
        for name in ("exchange", "collective_decay"):
            mat = getattr(self, name)
            if mat.shape != (m, m):
                raise ValueError(f"{name} must be {m}x{m}, got {mat.shape}")
            if not np.allclose(mat, mat.T, atol=1e-12, rtol=0):
                raise ValueError(f"{name} matrix must be symmetric")
        for arr in (self.lamb_shifts, self.exchange, self.individual_decay, self.collective_decay):
            arr.setflags(write=False)

    @property
    def n_atoms(self) -> int:
        return len(self.lamb_shifts)

    def max_abs_decay(self) -> float:
        """Largest |decay| over individual and collective entries."""
        off = self.collective_decay[~np.eye(self.n_atoms, dtype=bool)]
        ind = np.abs(self.individual_decay).max()
        return float(max(ind, np.abs(off).max())) if off.size else float(ind)

    def max_abs_exchange(self) -> float:
        off = self.exchange[~np.eye(self.n_atoms, dtype=bool)]
        return float(np.abs(off).max()) if off.size else 0.0

    def decay_matrix(self) -> np.ndarray:
        """The M x M decay matrix (G_j on the diagonal, Gc_jk off it).

        A physical Lindblad generator requires this matrix to be positive
        semidefinite; for mirror-terminated layouts it is rank one by
        construction.
        """
        mat = self.collective_decay.copy()
        np.fill_diagonal(mat, self.individual_decay)
        return mat


def _pair_sums(points_a, points_b, half: bool) -> tuple[float, float]:
    """Accumulate the sin (shift/exchange) and cos (decay) double sums.

    ``half`` applies the 1/2 prefactor carried by the shift and exchange
    formulas; decay sums come without it.
    """
    sin_sum = 0.0
    cos_sum = 0.0
    for pn in points_a:
        for pm in points_b:
            w = math.sqrt(pn.gamma * pm.gamma)
            diff = abs(pn.phase - pm.phase)
            summ = pn.phase + pm.phase
            sin_sum += w * (math.sin(diff) + math.sin(summ))
            cos_sum += w * (math.cos(diff) + math.cos(summ))
    if half:
        sin_sum *= 0.5
    return sin_sum, cos_sum


def decay_amplitudes(layout: WaveguideLayout) -> np.ndarray:
    """Per-atom emission amplitudes v_j = sum_n sqrt(gamma_jn) cos(phi_jn).

    The mirror makes the decay matrix rank one: G_j = 2 v_j**2 and
    Gc_jk = 2 v_j v_k, so every decay channel closes exactly where all v_j
    vanish.  Unlike the rates, the amplitudes cross zero linearly, which is
    what the DFI scanner exploits.
    """
    return np.array(
        [
            sum(math.sqrt(p.gamma) * math.cos(p.phase) for p in atom.points)
            for atom in layout.atoms
        ]
    )


def canonical_decay_amplitudes(kind, gamma: float, theta: float) -> np.ndarray:
    """Decay amplitudes of a canonical configuration, defined for all theta."""
    order = canonical_atom_order(Configuration(kind))
    v = [0.0, 0.0]
    for i, atom_id in enumerate(order):
        v[atom_id] += math.sqrt(gamma) * math.cos((2 * i + 1) * theta / 2)
    return np.array(v)


def general_coefficients(layout: WaveguideLayout) -> MasterEqCoefficients:
    """Evaluate the coefficient sums for an arbitrary validated layout."""
    m = layout.n_atoms
    lamb = np.zeros(m)
    decay = np.zeros(m)
    exch = np.zeros((m, m))
    coll = np.zeros((m, m))
    for j, atom_j in enumerate(layout.atoms):
        s, c = _pair_sums(atom_j.points, atom_j.points, half=True)
        lamb[j] = s
        decay[j] = c
        for k in range(j + 1, m):
            s, c = _pair_sums(atom_j.points, layout.atoms[k].points, half=True)
            exch[j, k] = exch[k, j] = s
            coll[j, k] = coll[k, j] = c
    return MasterEqCoefficients(lamb, exch, decay, coll)


def _two_atom(gamma, dwa, dwb, gab, ga, gb, gc) -> MasterEqCoefficients:
    return MasterEqCoefficients(
        lamb_shifts=gamma * np.array([dwa, dwb]),
        exchange=gamma * np.array([[0.0, gab], [gab, 0.0]]),
        individual_decay=gamma * np.array([ga, gb]),
        collective_decay=gamma * np.array([[0.0, gc], [gc, 0.0]]),
    )


def closed_form_braided(gamma: float, theta: float) -> MasterEqCoefficients:
    """Coefficients for the braided ordering (a, b, a, b), any real theta."""
    s, c = math.sin, math.cos
    t = theta
    dwa = s(2 * t) + s(3 * t) + 0.5 * s(t) + 0.5 * s(5 * t)
    dwb = s(2 * t) + s(5 * t) + 0.5 * s(3 * t) + 0.5 * s(7 * t)
    gab = 0.5 * (3 * s(t) + s(3 * t) + s(2 * t) + 2 * s(4 * t) + s(6 * t))
    ga = 2 + 2 * c(2 * t) + 2 * c(3 * t) + c(t) + c(5 * t)
    gb = 2 + 2 * c(2 * t) + 2 * c(5 * t) + c(3 * t) + c(7 * t)
    gc = 3 * c(t) + c(3 * t) + c(2 * t) + 2 * c(4 * t) + c(6 * t)
    return _two_atom(gamma, dwa, dwb, gab, ga, gb, gc)


def closed_form_separate(gamma: float, theta: float) -> MasterEqCoefficients:
    """Coefficients for the separate ordering (a, a, b, b), any real theta."""
    s, c = math.sin, math.cos
    t = theta
    dwa = s(t) + s(2 * t) + 0.5 * s(t) + 0.5 * s(3 * t)
    dwb = s(t) + s(6 * t) + 0.5 * s(5 * t) + 0.5 * s(7 * t)
    gab = 0.5 * (s(t) + 2 * s(2 * t) + 2 * s(3 * t) + 2 * s(4 * t) + s(5 * t))
    ga = 2 + 2 * c(t) + c(t) + c(3 * t) + 2 * c(2 * t)
    gb = 2 + 2 * c(t) + c(5 * t) + c(7 * t) + 2 * c(6 * t)
    gc = c(t) + 2 * c(2 * t) + 2 * c(3 * t) + 2 * c(4 * t) + c(5 * t)
    return _two_atom(gamma, dwa, dwb, gab, ga, gb, gc)


def closed_form_nested(gamma: float, theta: float) -> MasterEqCoefficients:
    """Coefficients for the nested ordering (a, b, b, a), any real theta."""
    s, c = math.sin, math.cos
    t = theta
    dwa = s(3 * t) + s(4 * t) + 0.5 * s(t) + 0.5 * s(7 * t)
    dwb = s(t) + s(4 * t) + 0.5 * s(3 * t) + 0.5 * s(5 * t)
    gab = 0.5 * (2 * s(t) + 3 * s(2 * t) + s(3 * t) + s(5 * t) + s(6 * t))
    ga = 2 + 2 * c(3 * t) + 2 * c(4 * t) + c(t) + c(7 * t)
    gb = 2 + 2 * c(t) + 2 * c(4 * t) + c(3 * t) + c(5 * t)
    gc = 2 * c(t) + 3 * c(2 * t) + c(3 * t) + c(5 * t) + c(6 * t)
    return _two_atom(gamma, dwa, dwb, gab, ga, gb, gc)


_CLOSED_FORMS = {
    Configuration.BRAIDED: closed_form_braided,
    Configuration.SEPARATE: closed_form_separate,
    Configuration.NESTED: closed_form_nested,
}


def canonical_coefficients(kind, gamma: float, theta: float) -> MasterEqCoefficients:
    """Closed-form coefficients for a canonical configuration kind."""
    return _CLOSED_FORMS[Configuration(kind)](gamma, theta)


def coefficients_for(config: CanonicalConfig) -> MasterEqCoefficients:
    return canonical_coefficients(config.kind, config.gamma, config.theta)

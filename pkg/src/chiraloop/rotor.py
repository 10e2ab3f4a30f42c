"""Rigid asymmetric-top rotor: per-J Hamiltonian blocks and their eigenpairs.

The Hamiltonian h(A Jz^2 + B Jx^2 + C Jy^2) is diagonalized block by block
in the prolate symmetric-top basis |J,K), K = -J..J.  Energies are stored
as frequencies (MHz).  Levels within a J block are labeled by tau = -J..J
in order of increasing energy.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RangeError",
    "OrderingError",
    "DegenerateLevelsWarning",
    "RotationalConstants",
    "AsymTopLevel",
    "rotor_hamiltonian_block",
    "rotor_levels",
    "transition_frequency",
]

DEGENERACY_TOL_MHZ = 1e-6


class RangeError(ValueError):
    """Rotational constants do not satisfy A >= B >= C > 0."""


class OrderingError(ValueError):
    """Transition endpoints are not ordered upper above lower."""


class DegenerateLevelsWarning(UserWarning):
    """Two eigenvalues are (nearly) equal; tau labels rely on tie-breaking."""


@dataclass(frozen=True)
class RotationalConstants:
    """Rotational constants A >= B >= C in MHz.

    Strict A > B > C is what makes tau labels unambiguous; equalities are
    accepted (prolate/spherical limits) and flagged per level block via
    DegenerateLevelsWarning.
    """

    A: float
    B: float
    C: float

    def __post_init__(self):
        if not (self.A >= self.B >= self.C > 0.0):
            raise RangeError(
                f"require A >= B >= C > 0, got A={self.A}, B={self.B}, C={self.C}"
            )


@dataclass(eq=False)
class AsymTopLevel:
    """One asymmetric-top level |J,tau> with its prolate-basis expansion.

    coeffs[k] is the amplitude on |J, K=k-J); the vector is normalized,
    real, and phase-fixed so its first nonzero entry (scanning K = -J..J)
    is positive.
    """

    J: int
    tau: int
    freq: float
    coeffs: np.ndarray

    def coeff(self, K: int) -> float:
        return float(self.coeffs[K + self.J])


def rotor_hamiltonian_block(constants: RotationalConstants, J: int) -> np.ndarray:
    """Real symmetric (2J+1)x(2J+1) Hamiltonian block in the |J,K) basis, MHz.

    Nonzero elements: <K|H|K> = A K^2 + (B+C)/2 (J(J+1) - K^2) and the
    K <-> K+-2 couplings (B-C)/4 sqrt(J(J+1)-K(K+-1)) sqrt(J(J+1)-(K+-1)(K+-2)).
    """
    if J < 0:
        raise ValueError(f"J must be >= 0, got {J}")
    n = 2 * J + 1
    jj = J * (J + 1)
    h = np.zeros((n, n))
    half_sum = 0.5 * (constants.B + constants.C)
    quarter_diff = 0.25 * (constants.B - constants.C)
    for i in range(n):
        K = i - J
        h[i, i] = constants.A * K * K + half_sum * (jj - K * K)
    for i in range(n - 2):
        K = i - J
        off = quarter_diff * np.sqrt(jj - K * (K + 1)) * np.sqrt(jj - (K + 1) * (K + 2))
        h[i, i + 2] = off
        h[i + 2, i] = off
    return h


def _jacobi_eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Returns (eigenvalues, eigenvectors as columns), unordered.  Plenty for
    the tiny dense blocks here and deterministic across platforms.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return np.array([a[0, 0]]), v
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    stop = 1e-15 * scale
    for _ in range(60):
        hollow = a.copy()
        np.fill_diagonal(hollow, 0.0)
        if np.linalg.norm(hollow) <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                t = np.sign(theta) / (abs(theta) + np.sqrt(1.0 + theta * theta))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                a[p, q] = a[q, p] = 0.0
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
    return np.diag(a).copy(), v


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    """Make the first nonzero coefficient (scanning K = -J..J) positive."""
    threshold = 1e-10 * np.abs(vec).max()
    for x in vec:
        if abs(x) > threshold:
            return vec if x > 0 else -vec
    return vec


def rotor_levels(constants: RotationalConstants, J: int) -> list[AsymTopLevel]:
    """All 2J+1 levels of the J block, sorted ascending in energy.

    tau runs -J..J in that order.  Exact or near ties (< 1e-6 MHz) emit a
    DegenerateLevelsWarning and are broken by lexicographic comparison of
    the (phase-fixed) coefficient vectors, so output is deterministic.
    """
    block = rotor_hamiltonian_block(constants, J)
    vals, vecs = _jacobi_eigh(block)
    pairs = [(vals[i], _fix_phase(vecs[:, i].copy())) for i in range(2 * J + 1)]
    pairs.sort(key=lambda p: (p[0], tuple(p[1])))

    freqs = [p[0] for p in pairs]
    if any(b - a < DEGENERACY_TOL_MHZ for a, b in zip(freqs, freqs[1:])):
        warnings.warn(
            f"degenerate levels in J={J} block; tau labels use tie-breaking",
            DegenerateLevelsWarning,
            stacklevel=2,
        )

    return [
        AsymTopLevel(J=J, tau=tau, freq=freq, coeffs=vec)
        for tau, (freq, vec) in zip(range(-J, J + 1), pairs)
    ]


def transition_frequency(upper: AsymTopLevel, lower: AsymTopLevel) -> float:
    """Strictly positive transition frequency upper.freq - lower.freq, MHz."""
    if upper.freq <= lower.freq:
        raise OrderingError(
            f"upper level at {upper.freq} MHz is not above lower at {lower.freq} MHz"
        )
    return upper.freq - lower.freq

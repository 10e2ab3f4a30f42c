"""Multi-sublevel dynamics on the 7-dimensional {a} + two-J=1 space.

Assembles the full resonant rotating-wave Hamiltonian over the ground
state and all six magnetic sublevels of the two J=1 levels, including the
spectator couplings that a would-be single loop must avoid, and propagates
states by exact eigendecomposition (the Hamiltonian is time independent
under resonant driving).  Energies in MHz, times in microseconds, so the
accumulated phase is 2 pi H t with no hidden constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .dipole import BodyDipole, rabi_frequency, reduced_matrix_element
from .fields import DriveField
from .rotor import AsymTopLevel

if TYPE_CHECKING:  # avoid a runtime cycle; loop imports this module
    from .loop import LoopSpec

__all__ = [
    "ResonanceAmbiguityError",
    "SublevelBasis",
    "coupling_block",
    "assemble_full_hamiltonian",
    "require_hermitian",
    "propagate",
    "loop_frame",
    "leakage",
    "enantiomer_contrast",
    "compare_full_vs_reduced",
]

RESONANCE_TOL_MHZ = 1e-3

HERMITICITY_ATOL = 1e-14


class ResonanceAmbiguityError(ValueError):
    """A drive frequency matches more than one level-pair transition."""


def _m_values(J: int) -> list[int]:
    return list(range(J, -J - 1, -1))  # +J .. -J, matching dressed-state order


@dataclass(frozen=True)
class SublevelBasis:
    """Fixed ordering of the 7 kets: a, then (1,tau_b,M), then (1,tau_c,M),
    with M = +1, 0, -1 inside each J=1 block."""

    kets: tuple[tuple[int, int, int], ...]  # (J, tau, M)

    @classmethod
    def for_levels(
        cls, level_a: AsymTopLevel, level_b: AsymTopLevel, level_c: AsymTopLevel
    ) -> "SublevelBasis":
        kets = [(0, level_a.tau, 0)]
        kets += [(1, level_b.tau, m) for m in _m_values(1)]
        kets += [(1, level_c.tau, m) for m in _m_values(1)]
        return cls(kets=tuple(kets))

    @property
    def dim(self) -> int:
        return len(self.kets)

    def index(self, J: int, tau: int, M: int) -> int:
        return self.kets.index((J, tau, M))

    def embed_b(self, amplitudes: np.ndarray) -> np.ndarray:
        """Lift a (M=+1,0,-1) amplitude triple on the b level to 7 dims."""
        out = np.zeros(self.dim, dtype=complex)
        out[1:4] = amplitudes
        return out

    def embed_c(self, amplitudes: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        out[4:7] = amplitudes
        return out


def coupling_block(
    upper: AsymTopLevel,
    lower: AsymTopLevel,
    field: DriveField,
    dipole: BodyDipole,
) -> np.ndarray:
    """Half-Rabi coupling block of one drive between two levels, MHz.

    Rows run over M_upper = +J..-J, columns over M_lower = +J..-J; entry
    (Mu, Ml) is Omega(Mu <- Ml)/2 summed over the field's polarization
    components.  Every Delta-M = sigma branch is included.
    """
    gamma = reduced_matrix_element(upper, lower, dipole).value
    m_up = _m_values(upper.J)
    m_lo = _m_values(lower.J)
    block = np.zeros((len(m_up), len(m_lo)), dtype=complex)
    for sigma, (amp, phase) in field.comps.items():
        for i, mu in enumerate(m_up):
            ml = mu - sigma
            if abs(ml) > lower.J:
                continue
            j = m_lo.index(ml)
            block[i, j] += 0.5 * rabi_frequency(
                upper, mu, lower, ml, sigma, amp, phase, dipole, gamma=gamma
            )
    return block


def assemble_full_hamiltonian(spec: "LoopSpec") -> np.ndarray:
    """Full 7x7 resonant RWA Hamiltonian over the SublevelBasis ordering, MHz.

    Each drive is assigned, by resonance within 1e-3 MHz, to the one level
    pair it addresses; all its polarization components couple every
    M-allowed sublevel pair of that transition, including branches outside
    the intended loop.  Off-resonant pairs are omitted.  Raises
    ResonanceAmbiguityError when a drive matches more than one pair.
    """
    pairs = {
        ("b", "a"): (spec.level_b, spec.level_a, spec.f_ba, slice(1, 4), slice(0, 1)),
        ("c", "a"): (spec.level_c, spec.level_a, spec.f_ca, slice(4, 7), slice(0, 1)),
        ("c", "b"): (spec.level_c, spec.level_b, spec.f_cb, slice(4, 7), slice(1, 4)),
    }
    h = np.zeros((7, 7), dtype=complex)
    for field in (spec.field1, spec.field2, spec.field3):
        matches = [
            key
            for key, (_, _, f_pair, _, _) in pairs.items()
            if abs(field.freq - f_pair) < RESONANCE_TOL_MHZ
        ]
        if len(matches) > 1:
            raise ResonanceAmbiguityError(
                f"drive at {field.freq} MHz is resonant with transitions "
                f"{[k for k in matches]}"
            )
        if not matches:
            continue  # cannot happen for a validated LoopSpec
        upper, lower, _, rows, cols = pairs[matches[0]]
        block = coupling_block(upper, lower, field, spec.dipole)
        h[rows, cols] += block
        h[cols, rows] += block.conj().T
    return h


def require_hermitian(h: np.ndarray, atol: float = HERMITICITY_ATOL) -> None:
    scale = max(1.0, float(np.abs(h).max()))
    if np.abs(h - h.conj().T).max() > atol * scale:
        raise ValueError("operator is not Hermitian")


def propagate(h: np.ndarray, psi0: np.ndarray, t: float) -> np.ndarray:
    """psi(t) = exp(-2 pi i H t) psi0 for Hermitian H (MHz) and t in us."""
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-8:
        raise ValueError("initial state must be normalized")
    require_hermitian(h)
    if t == 0.0:
        return psi0.copy()
    evals, evecs = np.linalg.eigh(h)
    phases = np.exp(-2j * np.pi * evals * t)
    return evecs @ (phases * (evecs.conj().T @ psi0))


def loop_frame(spec: "LoopSpec") -> np.ndarray:
    """Rows (a, b, c) of the dressed loop states embedded in 7 dims."""
    from .loop import dressed_states

    basis = SublevelBasis.for_levels(spec.level_a, spec.level_b, spec.level_c)
    ds = dressed_states(spec)
    frame = np.zeros((3, 7), dtype=complex)
    frame[0, 0] = 1.0
    frame[1] = basis.embed_b(ds.b)
    frame[2] = basis.embed_c(ds.c)
    return frame


def _initial_state(frame: np.ndarray, psi0_in_loop) -> np.ndarray:
    psi3 = np.asarray(psi0_in_loop, dtype=complex)
    norm = np.linalg.norm(psi3)
    if norm == 0:
        raise ValueError("initial loop-state amplitudes are all zero")
    psi3 = psi3 / norm
    return psi3 @ frame  # sum_i c_i |i>, rows of frame are the loop kets


def leakage(spec: "LoopSpec", psi0_in_loop, t_grid: Iterable[float]) -> float:
    """Worst population outside span{a, b, c} over the time grid.

    Essentially zero (< 1e-10) for closed configurations; order one for
    leaky ones with comparable Rabi frequencies.
    """
    frame = loop_frame(spec)
    h = assemble_full_hamiltonian(spec)
    psi0 = _initial_state(frame, psi0_in_loop)
    evals, evecs = np.linalg.eigh(h)
    coeff0 = evecs.conj().T @ psi0
    worst = 0.0
    for t in t_grid:
        psi = evecs @ (np.exp(-2j * np.pi * evals * float(t)) * coeff0)
        inside = np.abs(frame.conj() @ psi) ** 2
        worst = max(worst, 1.0 - float(inside.sum()))
    return worst


def enantiomer_contrast(
    spec: "LoopSpec", t: float
) -> tuple[tuple[float, float, float], tuple[float, float, float]]:
    """Loop-state populations (P_a, P_b, P_c) at time t for both enantiomers.

    Starts from the ground state |a> and evolves under the full 7-level
    Hamiltonian built with the given dipole and with its mirror image; the
    same drives act on both.
    """
    result = []
    for s in (spec, spec.mirrored()):
        frame = loop_frame(s)
        h = assemble_full_hamiltonian(s)
        psi = propagate(h, frame[0], t)
        pops = np.abs(frame.conj() @ psi) ** 2
        result.append(tuple(float(p) for p in pops))
    return result[0], result[1]


def compare_full_vs_reduced(
    spec: "LoopSpec", t_grid: Iterable[float], psi0_in_loop=(1.0, 0.0, 0.0)
) -> float:
    """Max difference between 7-level and 3-level loop propagation.

    Evolves the same loop-frame initial state under the full Hamiltonian
    (projected back onto the dressed frame) and under the 3x3 loop
    Hamiltonian built from the loop's Rabi frequencies.  For closed
    configurations the two agree to ~1e-10; for leaky ones the reduced
    model is a best-effort truncation and the difference is large.
    """
    from .loop import SingleLoopHamiltonian, loop_diagnostics

    frame = loop_frame(spec)
    h_full = assemble_full_hamiltonian(spec)
    h_loop = SingleLoopHamiltonian(*loop_diagnostics(spec).omegas).matrix()

    psi3 = np.asarray(psi0_in_loop, dtype=complex)
    psi3 = psi3 / np.linalg.norm(psi3)
    psi7 = psi3 @ frame

    evals7, evecs7 = np.linalg.eigh(h_full)
    coeff7 = evecs7.conj().T @ psi7
    evals3, evecs3 = np.linalg.eigh(h_loop)
    coeff3 = evecs3.conj().T @ psi3

    worst = 0.0
    for t in t_grid:
        t = float(t)
        full = evecs7 @ (np.exp(-2j * np.pi * evals7 * t) * coeff7)
        reduced = evecs3 @ (np.exp(-2j * np.pi * evals3 * t) * coeff3)
        projected = frame.conj() @ full
        worst = max(worst, float(np.linalg.norm(projected - reduced)))
    return worst

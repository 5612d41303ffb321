"""Exact state-vector simulation for generators with G^3 = G.

Exponentials are never materialized as matrices: exp(-i theta G) |s> is
assembled from two sparse applications of G using
exp(-i theta G) = I + (cos theta - 1) G^2 - i sin theta G.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .paulis import PauliString, PauliSum

SELECTION = "selection"
OPTIMIZATION = "optimization"


class EvalCounter:
    """Monotone count of Hamiltonian expectation evaluations, by phase label.

    Shared by a state vector and all its copies, so per-operator work on
    cloned states still lands in one ledger.
    """

    __slots__ = ("counts",)

    def __init__(self):
        self.counts = {}

    def bump(self, phase: str):
        self.counts[phase] = self.counts.get(phase, 0) + 1

    def get(self, phase: str) -> int:
        return self.counts.get(phase, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def snapshot(self) -> dict:
        return dict(self.counts)


class StateVector:
    """2^n complex amplitudes plus a shared evaluation counter."""

    __slots__ = ("n_qubits", "amps", "counter")

    def __init__(self, n_qubits: int, amps: np.ndarray, counter: EvalCounter | None = None):
        self.n_qubits = n_qubits
        self.amps = amps
        self.counter = counter if counter is not None else EvalCounter()

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amps.copy(), self.counter)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def basis_index(self) -> int | None:
        """Index of the single occupied basis state, or None if superposed."""
        nz = np.flatnonzero(np.abs(self.amps) > 1e-12)
        if nz.shape[0] == 1 and abs(abs(self.amps[nz[0]]) - 1.0) < 1e-12:
            return int(nz[0])
        return None


def occupation_mask(occ) -> int:
    """Normalize an occupation (int bitmask or iterable of orbitals) to a mask."""
    if isinstance(occ, (int, np.integer)):
        return int(occ)
    mask = 0
    for k in occ:
        mask |= 1 << int(k)
    return mask


def prepare_basis_state(n_qubits: int, occ, counter: EvalCounter | None = None) -> StateVector:
    mask = occupation_mask(occ)
    if mask >= (1 << n_qubits):
        raise ValueError("occupation outside qubit register")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[mask] = 1.0
    return StateVector(n_qubits, amps, counter)


def apply_pauli_sum(state: StateVector, op: PauliSum) -> np.ndarray:
    """Raw amplitudes of op|state> (not normalized, no counter activity)."""
    if op.n_qubits != state.n_qubits:
        raise ValueError("qubit-count mismatch")
    xs, zs, ws = op.kernel_arrays()
    return kernels.apply_sum(state.amps, xs, zs, ws)


def apply_generator_exponential(state: StateVector, generator, theta: float) -> StateVector:
    """exp(-i theta G)|state> for a generator with G^3 = G."""
    pauli = generator.pauli if hasattr(generator, "pauli") else generator
    if pauli.n_qubits != state.n_qubits:
        raise ValueError("qubit-count mismatch")
    if theta == 0.0:
        return state.copy()
    xs, zs, ws = pauli.kernel_arrays()
    g1 = kernels.apply_sum(state.amps, xs, zs, ws)
    g2 = kernels.apply_sum(g1, xs, zs, ws)
    amps = state.amps + (math.cos(theta) - 1.0) * g2 - (1j * math.sin(theta)) * g1
    return StateVector(state.n_qubits, amps, state.counter)


def apply_pauli_rotation(state: StateVector, word: PauliString, theta: float) -> StateVector:
    """exp(-i theta P)|state> = cos(theta)|state> - i sin(theta) P|state>."""
    if word.phase != 1:
        raise ValueError("rotation requires a bare word with phase 1")
    if word.n_qubits != state.n_qubits:
        raise ValueError("qubit-count mismatch")
    xs, zs, ws = PauliSum.from_string(word).kernel_arrays()
    pv = kernels.apply_sum(state.amps, xs, zs, ws)
    amps = math.cos(theta) * state.amps - (1j * math.sin(theta)) * pv
    return StateVector(state.n_qubits, amps, state.counter)


def expectation(state: StateVector, h: PauliSum, phase: str = OPTIMIZATION) -> float:
    """<state|H|state> in Hartree; counts one evaluation under `phase`."""
    if not h.is_hermitian:
        raise ValueError("expectation requires a Hermitian operator")
    if h.n_qubits != state.n_qubits:
        raise ValueError("qubit-count mismatch")
    xs, zs, ws = h.kernel_arrays()
    value = kernels.expect_sum(state.amps, xs, zs, ws)
    state.counter.bump(phase)
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise ValueError(f"expectation came out complex: {value}")
    return float(value.real)

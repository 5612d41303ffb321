"""Exact ground-state energies of the qubit Hamiltonian, for validation.

Lanczos (scipy eigsh) over a linear operator whose matvec is the package's
own sparse Pauli kernel; optionally restricted to a particle-number / spin-
projection sector by embedding sector vectors into the full register.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from . import kernels
from .paulis import PauliSum


class OracleConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleResult:
    e0: float
    residual_norm: float
    iterations: int


def sector_indices(n_qubits: int, n_elec: int, ms2: int) -> np.ndarray:
    """Basis indices with the given electron count and spin projection
    (interleaved ordering: even qubits are spin-up)."""
    idx = np.arange(1 << n_qubits, dtype=np.uint64)
    up = np.bitwise_count(idx & np.uint64(0x5555555555555555)).astype(int)
    down = np.bitwise_count(idx & np.uint64(0xAAAAAAAAAAAAAAAA)).astype(int)
    keep = (up + down == n_elec) & (up - down == ms2)
    return np.flatnonzero(keep).astype(np.int64)


def ground_energy(
    h: PauliSum,
    sector: tuple[int, int] | None = None,
    seed: int = 7,
    residual_target: float = 1e-10,
    maxiter: int = 10_000,
) -> OracleResult:
    """Lowest eigenvalue, via H*v products only."""
    if h.n_qubits > 20:
        raise ValueError("oracle is limited to 20 qubits")
    if not h.is_hermitian:
        raise ValueError("oracle requires a Hermitian operator")

    xs, zs, ws = h.kernel_arrays()
    dim_full = 1 << h.n_qubits
    matvecs = 0

    if sector is not None:
        idx = sector_indices(h.n_qubits, *sector)
        if idx.size == 0:
            raise ValueError(f"sector {sector} is empty")

        def matvec(v):
            nonlocal matvecs
            matvecs += 1
            full = np.zeros(dim_full, dtype=np.complex128)
            full[idx] = v
            return kernels.apply_sum(full, xs, zs, ws)[idx]

        dim = idx.size
    else:

        def matvec(v):
            nonlocal matvecs
            matvecs += 1
            return kernels.apply_sum(np.ascontiguousarray(v, dtype=np.complex128), xs, zs, ws)

        dim = dim_full

    if dim <= 64:
        # tiny blocks: assemble densely from matvecs and diagonalize
        block = np.empty((dim, dim), dtype=np.complex128)
        eye = np.eye(dim, dtype=np.complex128)
        for col in range(dim):
            block[:, col] = matvec(eye[:, col])
        vals, vecs = np.linalg.eigh(block)
        e0 = float(vals[0])
        v0 = vecs[:, 0]
        residual = float(np.linalg.norm(matvec(v0) - e0 * v0))
        return OracleResult(e0, residual, matvecs)

    rng = np.random.default_rng(seed)
    v0 = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    op = LinearOperator((dim, dim), matvec=matvec, dtype=np.complex128)
    try:
        vals, vecs = eigsh(op, k=1, which="SA", v0=v0, tol=1e-13, maxiter=maxiter)
    except ArpackNoConvergence as exc:
        raise OracleConvergenceError(
            f"Lanczos did not converge within {maxiter} iterations: {exc}"
        ) from exc
    e0 = float(vals[0])
    vec = vecs[:, 0]
    residual = float(np.linalg.norm(matvec(vec) - e0 * vec))
    if residual > 10 * residual_target:
        raise OracleConvergenceError(
            f"residual {residual:.3e} above target {residual_target:.0e} after {matvecs} products"
        )
    return OracleResult(e0, residual, matvecs)


def ground_energy_dense(h: PauliSum) -> float:
    """Dense diagonalization self-test; refuse above 10 qubits."""
    if h.n_qubits > 10:
        raise ValueError("dense oracle is limited to 10 qubits")
    return float(np.linalg.eigvalsh(h.matrix())[0])

"""Restricted Hartree-Fock with DIIS, plus the MO transformation."""

from __future__ import annotations

import numpy as np


class ScfError(RuntimeError):
    pass


def restricted_hartree_fock(S, h, eri, n_elec, e_nuc, max_iter=200, conv=1e-12):
    """Closed-shell RHF; returns (e_tot, C, orbital_energies)."""
    if n_elec % 2:
        raise ScfError("restricted SCF needs an even electron count")
    n_occ = n_elec // 2

    vals, vecs = np.linalg.eigh(S)
    if vals.min() < 1e-10:
        raise ScfError("overlap matrix is numerically singular")
    X = vecs @ np.diag(vals**-0.5) @ vecs.T

    F = h.copy()
    energy = 0.0
    focks, errors = [], []
    for iteration in range(max_iter):
        Fp = X.T @ F @ X
        eps, Cp = np.linalg.eigh(Fp)
        C = X @ Cp
        Cocc = C[:, :n_occ]
        D = 2.0 * Cocc @ Cocc.T

        J = np.einsum("pqrs,rs->pq", eri, D)
        K = np.einsum("prqs,rs->pq", eri, D)
        F_new = h + J - 0.5 * K

        e_new = 0.5 * np.einsum("pq,qp->", D, h + F_new) + e_nuc

        err = F_new @ D @ S - S @ D @ F_new
        focks.append(F_new)
        errors.append(err)
        if len(focks) > 8:
            focks.pop(0)
            errors.pop(0)

        if iteration > 0 and abs(e_new - energy) < conv and np.abs(err).max() < 1e-8:
            return e_new, C, eps
        energy = e_new

        # DIIS extrapolation over the stored Fock matrices
        m = len(focks)
        if m > 1:
            B = -np.ones((m + 1, m + 1))
            B[m, m] = 0.0
            for a in range(m):
                for b in range(m):
                    B[a, b] = np.einsum("pq,pq->", errors[a], errors[b])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                w = np.linalg.solve(B, rhs)[:m]
                F = sum(wi * Fi for wi, Fi in zip(w, focks))
            except np.linalg.LinAlgError:
                F = F_new
        else:
            F = F_new

    raise ScfError(f"SCF did not converge in {max_iter} iterations")


def mo_integrals(h, eri, C):
    """Transform AO integrals to the MO basis (chemists' notation kept)."""
    h_mo = C.T @ h @ C
    tmp = np.einsum("pqrs,pi->iqrs", eri, C, optimize=True)
    tmp = np.einsum("iqrs,qj->ijrs", tmp, C, optimize=True)
    tmp = np.einsum("ijrs,rk->ijks", tmp, C, optimize=True)
    eri_mo = np.einsum("ijks,sl->ijkl", tmp, C, optimize=True)
    return h_mo, eri_mo

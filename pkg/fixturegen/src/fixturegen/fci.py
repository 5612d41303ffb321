"""Dense full CI over Slater determinants, independent of any qubit mapping.

Determinants are spin-orbital occupation bitmasks (spin orbital 2i = spatial
orbital i up, 2i+1 down). The Hamiltonian matrix is assembled from
Slater-Condon rules with physicists' antisymmetrized integrals.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def _spin_orbital_tables(h_mo, eri_mo):
    """<pq|rs> over spin orbitals from spatial chemists' (ij|kl)."""
    n = h_mo.shape[0]
    n_so = 2 * n
    h = np.zeros((n_so, n_so))
    for p in range(n_so):
        for q in range(n_so):
            if p % 2 == q % 2:
                h[p, q] = h_mo[p // 2, q // 2]
    # <pq|rs> = (pr|qs) delta(sp,sr) delta(sq,ss)
    phys = np.zeros((n_so,) * 4)
    for p in range(n_so):
        for q in range(n_so):
            for r in range(n_so):
                if p % 2 != r % 2:
                    continue
                for s in range(n_so):
                    if q % 2 != s % 2:
                        continue
                    phys[p, q, r, s] = eri_mo[p // 2, r // 2, q // 2, s // 2]
    return h, phys


def _determinants(n_so, n_elec, ms2):
    dets = []
    for occ in combinations(range(n_so), n_elec):
        sz2 = sum(1 if k % 2 == 0 else -1 for k in occ)
        if sz2 == ms2:
            mask = 0
            for k in occ:
                mask |= 1 << k
            dets.append(mask)
    return dets


def _excitation(det_i, det_j):
    """(holes, particles) ordered lists taking det_i to det_j."""
    diff = det_i ^ det_j
    holes = [k for k in range(diff.bit_length()) if (diff >> k) & 1 and (det_i >> k) & 1]
    parts = [k for k in range(diff.bit_length()) if (diff >> k) & 1 and (det_j >> k) & 1]
    return holes, parts


def _perm_sign(det, p, q):
    """Sign of moving an electron p -> q in det (p occupied, q empty)."""
    lo, hi = (p, q) if p < q else (q, p)
    count = ((det >> (lo + 1)) & ((1 << (hi - lo - 1)) - 1)).bit_count()
    return -1.0 if count & 1 else 1.0


def fci_ground_energy(h_mo, eri_mo, n_elec, ms2, e_nuc):
    """Lowest eigenvalue of the FCI Hamiltonian in the (N, Sz) sector."""
    h, phys = _spin_orbital_tables(h_mo, eri_mo)
    n_so = h.shape[0]
    dets = _determinants(n_so, n_elec, ms2)
    dim = len(dets)
    H = np.zeros((dim, dim))

    occ_cache = [[k for k in range(n_so) if (d >> k) & 1] for d in dets]
    index = {d: i for i, d in enumerate(dets)}

    for i, det in enumerate(dets):
        occ = occ_cache[i]
        # diagonal
        e = sum(h[p, p] for p in occ)
        for a, p in enumerate(occ):
            for q in occ[a + 1:]:
                e += phys[p, q, p, q] - phys[p, q, q, p]
        H[i, i] = e
        # singles
        for p in occ:
            for q in range(n_so):
                if (det >> q) & 1 or q % 2 != p % 2:
                    continue
                det2 = det ^ (1 << p) | (1 << q)
                j = index.get(det2)
                if j is None or j < i:
                    continue
                sign = _perm_sign(det, p, q)
                val = h[p, q]
                for c in occ:
                    if c != p:
                        val += phys[p, c, q, c] - phys[p, c, c, q]
                H[i, j] = H[j, i] = sign * val
        # doubles
        for a, p in enumerate(occ):
            for q in occ[a + 1:]:
                for r in range(n_so):
                    if (det >> r) & 1:
                        continue
                    for s in range(r + 1, n_so):
                        if (det >> s) & 1:
                            continue
                        if (p % 2 + q % 2) != (r % 2 + s % 2):
                            continue
                        det2 = det ^ (1 << p) ^ (1 << q) | (1 << r) | (1 << s)
                        j = index.get(det2)
                        if j is None or j < i:
                            continue
                        holes, parts = _excitation(det, det2)
                        hp, hq = holes
                        pr, ps = parts
                        sign = _perm_sign(det, hp, pr)
                        mid = det ^ (1 << hp) | (1 << pr)
                        sign *= _perm_sign(mid, hq, ps)
                        val = phys[hp, hq, pr, ps] - phys[hp, hq, ps, pr]
                        H[i, j] = H[j, i] = sign * val

    vals = np.linalg.eigvalsh(H)
    return float(vals[0] + e_nuc), dim

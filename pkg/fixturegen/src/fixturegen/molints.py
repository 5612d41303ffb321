"""McMurchie-Davidson integrals over contracted Cartesian Gaussians.

Covers s and p shells (all the fixture molecules need). All coordinates in
Bohr, energies in Hartree. ERIs are returned in chemists' notation (ij|kl).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import hyp1f1


def boys(n, x):
    return hyp1f1(n + 0.5, n + 1.5, -x) / (2.0 * n + 1.0)


def hermite_coefs(i, j, qx, a, b):
    """E_t coefficients of the Gaussian product theorem along one axis."""
    p = a + b
    mu = a * b / p
    E = {}

    def rec(ii, jj, t):
        if t < 0 or t > ii + jj:
            return 0.0
        key = (ii, jj, t)
        if key in E:
            return E[key]
        if ii == jj == t == 0:
            val = math.exp(-mu * qx * qx)
        elif ii > 0:
            val = (
                rec(ii - 1, jj, t - 1) / (2 * p)
                - (b * qx / p) * rec(ii - 1, jj, t)
                + (t + 1) * rec(ii - 1, jj, t + 1)
            )
        else:
            val = (
                rec(ii, jj - 1, t - 1) / (2 * p)
                + (a * qx / p) * rec(ii, jj - 1, t)
                + (t + 1) * rec(ii, jj - 1, t + 1)
            )
        E[key] = val
        return val

    return [rec(i, j, t) for t in range(i + j + 1)]


def hermite_coulomb(t, u, v, n, p, pc):
    """R_tuv auxiliary Hermite Coulomb integrals."""
    if t == u == v == 0:
        r2 = pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2]
        return (-2.0 * p) ** n * boys(n, p * r2)
    if t > 0:
        val = pc[0] * hermite_coulomb(t - 1, u, v, n + 1, p, pc)
        if t > 1:
            val += (t - 1) * hermite_coulomb(t - 2, u, v, n + 1, p, pc)
        return val
    if u > 0:
        val = pc[1] * hermite_coulomb(t, u - 1, v, n + 1, p, pc)
        if u > 1:
            val += (u - 1) * hermite_coulomb(t, u - 2, v, n + 1, p, pc)
        return val
    val = pc[2] * hermite_coulomb(t, u, v - 1, n + 1, p, pc)
    if v > 1:
        val += (v - 1) * hermite_coulomb(t, u, v - 2, n + 1, p, pc)
    return val


def _prim_overlap(a, lmn1, A, b, lmn2, B):
    s = (math.pi / (a + b)) ** 1.5
    for ax in range(3):
        s *= hermite_coefs(lmn1[ax], lmn2[ax], A[ax] - B[ax], a, b)[0]
    return s


def _prim_kinetic(a, lmn1, A, b, lmn2, B):
    l2, m2, n2 = lmn2

    def ov(dl, dm, dn):
        lmn = (l2 + dl, m2 + dm, n2 + dn)
        if min(lmn) < 0:
            return 0.0
        return _prim_overlap(a, lmn1, A, b, lmn, B)

    term0 = b * (2 * (l2 + m2 + n2) + 3) * ov(0, 0, 0)
    term1 = -2 * b * b * (ov(2, 0, 0) + ov(0, 2, 0) + ov(0, 0, 2))
    term2 = -0.5 * (
        l2 * (l2 - 1) * ov(-2, 0, 0)
        + m2 * (m2 - 1) * ov(0, -2, 0)
        + n2 * (n2 - 1) * ov(0, 0, -2)
    )
    return term0 + term1 + term2


def _prim_nuclear(a, lmn1, A, b, lmn2, B, C):
    p = a + b
    P = (a * np.asarray(A) + b * np.asarray(B)) / p
    pc = P - np.asarray(C)
    Ex = hermite_coefs(lmn1[0], lmn2[0], A[0] - B[0], a, b)
    Ey = hermite_coefs(lmn1[1], lmn2[1], A[1] - B[1], a, b)
    Ez = hermite_coefs(lmn1[2], lmn2[2], A[2] - B[2], a, b)
    val = 0.0
    for t in range(len(Ex)):
        for u in range(len(Ey)):
            for v in range(len(Ez)):
                val += Ex[t] * Ey[u] * Ez[v] * hermite_coulomb(t, u, v, 0, p, pc)
    return 2.0 * math.pi / p * val


def _prim_eri(a, lmn1, A, b, lmn2, B, c, lmn3, C, d, lmn4, D):
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = (a * np.asarray(A) + b * np.asarray(B)) / p
    Q = (c * np.asarray(C) + d * np.asarray(D)) / q
    pq = P - Q
    E1 = [hermite_coefs(lmn1[ax], lmn2[ax], A[ax] - B[ax], a, b) for ax in range(3)]
    E2 = [hermite_coefs(lmn3[ax], lmn4[ax], C[ax] - D[ax], c, d) for ax in range(3)]
    val = 0.0
    for t in range(len(E1[0])):
        for u in range(len(E1[1])):
            for v in range(len(E1[2])):
                e1 = E1[0][t] * E1[1][u] * E1[2][v]
                if e1 == 0.0:
                    continue
                for tt in range(len(E2[0])):
                    for uu in range(len(E2[1])):
                        for vv in range(len(E2[2])):
                            e2 = E2[0][tt] * E2[1][uu] * E2[2][vv]
                            if e2 == 0.0:
                                continue
                            val += (
                                e1
                                * e2
                                * (-1.0) ** (tt + uu + vv)
                                * hermite_coulomb(t + tt, u + uu, v + vv, 0, alpha, pq)
                            )
    return val * 2.0 * math.pi**2.5 / (p * q * math.sqrt(p + q))


@dataclass
class ContractedGaussian:
    lmn: tuple
    center: np.ndarray
    exps: np.ndarray
    coefs: np.ndarray  # includes primitive norms; contracted self-overlap = 1

    @classmethod
    def build(cls, lmn, center, exps, coefs):
        exps = np.asarray(exps, dtype=float)
        l, m, n = lmn
        norms = (2 * exps / math.pi) ** 0.75 * (4 * exps) ** ((l + m + n) / 2.0)
        # odd angular momenta > 1 would need double-factorial corrections
        if max(lmn) > 1:
            raise ValueError("only s and p shells are supported")
        coefs = np.asarray(coefs, dtype=float) * norms
        cg = cls(lmn, np.asarray(center, dtype=float), exps, coefs)
        s = cg.overlap_with(cg)
        cg.coefs = cg.coefs / math.sqrt(s)
        return cg

    def overlap_with(self, other):
        val = 0.0
        for a, ca in zip(self.exps, self.coefs):
            for b, cb in zip(other.exps, other.coefs):
                val += ca * cb * _prim_overlap(a, self.lmn, self.center, b, other.lmn, other.center)
        return val


class Molecule:
    """Geometry plus basis; computes S, T, V, ERI and the nuclear repulsion."""

    def __init__(self, atoms, charge=0):
        # atoms: [(element, (x, y, z) in Bohr)]
        from .basis import NUCLEAR_CHARGE, shells_for_atom

        self.atoms = [(el, np.asarray(xyz, dtype=float)) for el, xyz in atoms]
        self.charge = charge
        self.n_elec = sum(NUCLEAR_CHARGE[el] for el, _ in self.atoms) - charge
        self.basis = []
        for el, xyz in self.atoms:
            for lmn, center, exps, coefs in shells_for_atom(el, xyz):
                self.basis.append(ContractedGaussian.build(lmn, center, exps, coefs))
        self.nbf = len(self.basis)

    def nuclear_repulsion(self):
        from .basis import NUCLEAR_CHARGE

        e = 0.0
        for i, (el1, r1) in enumerate(self.atoms):
            for el2, r2 in self.atoms[i + 1:]:
                e += NUCLEAR_CHARGE[el1] * NUCLEAR_CHARGE[el2] / np.linalg.norm(r1 - r2)
        return e

    def _contracted(self, prim_fn, g1, g2, *extra):
        val = 0.0
        for a, ca in zip(g1.exps, g1.coefs):
            for b, cb in zip(g2.exps, g2.coefs):
                val += ca * cb * prim_fn(a, g1.lmn, g1.center, b, g2.lmn, g2.center, *extra)
        return val

    def one_electron(self):
        from .basis import NUCLEAR_CHARGE

        n = self.nbf
        S = np.zeros((n, n))
        T = np.zeros((n, n))
        V = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1):
                g1, g2 = self.basis[i], self.basis[j]
                S[i, j] = S[j, i] = self._contracted(_prim_overlap, g1, g2)
                T[i, j] = T[j, i] = self._contracted(_prim_kinetic, g1, g2)
                v = 0.0
                for el, xyz in self.atoms:
                    v -= NUCLEAR_CHARGE[el] * self._contracted(_prim_nuclear, g1, g2, xyz)
                V[i, j] = V[j, i] = v
        return S, T, V

    def _contracted_eri(self, i, j, k, l):
        g1, g2, g3, g4 = (self.basis[m] for m in (i, j, k, l))
        val = 0.0
        for a, ca in zip(g1.exps, g1.coefs):
            for b, cb in zip(g2.exps, g2.coefs):
                for c, cc in zip(g3.exps, g3.coefs):
                    for d, cd in zip(g4.exps, g4.coefs):
                        val += ca * cb * cc * cd * _prim_eri(
                            a, g1.lmn, g1.center, b, g2.lmn, g2.center,
                            c, g3.lmn, g3.center, d, g4.lmn, g4.center,
                        )
        return val

    def two_electron(self):
        """Full (ij|kl) tensor, filled through 8-fold symmetry."""
        n = self.nbf
        eri = np.zeros((n, n, n, n))
        for i in range(n):
            for j in range(i + 1):
                ij = i * (i + 1) // 2 + j
                for k in range(i + 1):
                    for l in range(k + 1):
                        kl = k * (k + 1) // 2 + l
                        if ij < kl:
                            continue
                        val = self._contracted_eri(i, j, k, l)
                        for a, b, c, d in (
                            (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                            (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
                        ):
                            eri[a, b, c, d] = val
        return eri

"""FCIDUMP ingestion, spin-orbital expansion, and the qubit Hamiltonian.

Spatial-orbital integrals use chemists' notation (ij|kl) with 8-fold
permutation symmetry. Spin orbitals are interleaved: spin orbital 2i is
spatial orbital i with spin up, 2i+1 the same orbital with spin down.
The two-body coefficient g[p,q,r,s] multiplies a+_p a+_q a_r a_s with a
factor 1/2, and is assembled as (P(p)P(s)|P(q)P(r)) under the spin
conservation deltas spin(p)=spin(s), spin(q)=spin(r).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .paulis import PauliSum, jordan_wigner


class FcidumpError(ValueError):
    pass


class FcidumpFormatError(FcidumpError):
    pass


class FcidumpIndexError(FcidumpError):
    pass


class FcidumpConsistencyError(FcidumpError):
    pass


@dataclass
class MolecularIntegrals:
    """Spatial-orbital integral tables plus metadata from an FCIDUMP."""

    n_orb: int
    n_elec: int
    ms2: int
    e_core: float
    h1: np.ndarray   # (n_orb, n_orb), symmetric
    eri: np.ndarray  # (n_orb,)*4, chemists' (ij|kl), 8-fold symmetric
    orbsym: tuple = ()

    def validate(self, tol=1e-12):
        n = self.n_orb
        if not (0 < self.n_elec <= 2 * n):
            raise FcidumpFormatError(f"electron count {self.n_elec} out of range")
        if abs(self.ms2) > self.n_elec:
            raise FcidumpFormatError(f"|MS2|={abs(self.ms2)} exceeds NELEC")
        if self.h1.shape != (n, n) or self.eri.shape != (n, n, n, n):
            raise FcidumpFormatError("integral table shapes do not match NORB")
        if np.abs(self.h1 - self.h1.T).max() > tol:
            raise FcidumpConsistencyError("one-electron table not symmetric")
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if np.abs(self.eri - self.eri.transpose(perm)).max() > tol:
                raise FcidumpConsistencyError("two-electron table breaks 8-fold symmetry")
        return self


def _eri_images(i, j, k, l):
    return {
        (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
        (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
    }


_NML_ITEM = re.compile(r"([A-Za-z0-9_]+)\s*=\s*([^=]*?)(?=(?:[,\s][A-Za-z0-9_]+\s*=)|$)")


def parse_fcidump(text: str) -> MolecularIntegrals:
    """Parse an FCIDUMP document (namelist header + integral lines)."""
    lines = text.splitlines()
    header_parts = []
    body_start = None
    for ln, raw in enumerate(lines):
        stripped = raw.strip()
        if ln == 0:
            stripped = re.sub(r"^&[A-Za-z]+", "", stripped).strip()
        if stripped.upper().endswith("&END") or stripped.endswith("/"):
            header_parts.append(re.sub(r"(&END|/)\s*$", "", stripped, flags=re.I))
            body_start = ln + 1
            break
        header_parts.append(stripped)
    if body_start is None:
        raise FcidumpFormatError("namelist header never terminated by / or &END")

    header = " ".join(header_parts)
    fields = {}
    for key, value in _NML_ITEM.findall(header):
        fields[key.upper()] = value.strip().rstrip(",").strip()
    if "NORB" not in fields or "NELEC" not in fields:
        raise FcidumpFormatError("header must define NORB and NELEC")
    n_orb = int(fields["NORB"])
    n_elec = int(fields["NELEC"])
    ms2 = int(fields.get("MS2", "0") or 0)
    orbsym = tuple(
        int(tok) for tok in fields.get("ORBSYM", "").split(",") if tok.strip()
    )

    h1 = np.zeros((n_orb, n_orb))
    eri = np.zeros((n_orb,) * 4)
    e_core = 0.0
    seen: dict[tuple, float] = {}

    def store(kind_key, value, assign):
        prev = seen.get(kind_key)
        if prev is not None and abs(prev - value) > 1e-10:
            raise FcidumpConsistencyError(
                f"conflicting duplicate entry {kind_key}: {prev} vs {value}"
            )
        seen[kind_key] = value
        assign()

    for raw in lines[body_start:]:
        tokens = raw.split()
        if not tokens:
            continue
        if len(tokens) != 5:
            raise FcidumpFormatError(f"expected 'value i j k l', got: {raw!r}")
        try:
            value = float(tokens[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(t) for t in tokens[1:])
        except ValueError as exc:
            raise FcidumpFormatError(f"unparseable integral line: {raw!r}") from exc
        for idx in (i, j, k, l):
            if not 0 <= idx <= n_orb:
                raise FcidumpIndexError(f"orbital index {idx} outside [0, {n_orb}]")
        if i == j == k == l == 0:
            def put_core():
                nonlocal e_core
                e_core = value
            store(("core",), value, put_core)
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpIndexError(f"one-electron entry with zero index: {raw!r}")
            a, b = i - 1, j - 1

            def put_h1(a=a, b=b, v=value):
                h1[a, b] = v
                h1[b, a] = v

            store(("h1", max(a, b), min(a, b)), value, put_h1)
        elif 0 in (i, j, k, l):
            raise FcidumpIndexError(f"two-electron entry with zero index: {raw!r}")
        else:
            quad = (i - 1, j - 1, k - 1, l - 1)
            canon = max(_eri_images(*quad))

            def put_eri(quad=quad, v=value):
                for img in _eri_images(*quad):
                    eri[img] = v

            store(("eri",) + canon, value, put_eri)

    return MolecularIntegrals(n_orb, n_elec, ms2, e_core, h1, eri, orbsym).validate()


def serialize_fcidump(mi: MolecularIntegrals) -> str:
    """Write the canonical 8-fold-reduced dialect; reparses to the same tables."""
    n = mi.n_orb
    out = [f" &FCI NORB={n},NELEC={mi.n_elec},MS2={mi.ms2},"]
    if mi.orbsym:
        out.append("  ORBSYM=" + ",".join(str(s) for s in mi.orbsym) + ",")
    out.append(" &END")
    fmt = "%.16E %4d %4d %4d %4d"
    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    v = mi.eri[i, j, k, l]
                    if v != 0.0:
                        out.append(fmt % (v, i + 1, j + 1, k + 1, l + 1))
    for i in range(n):
        for j in range(i + 1):
            if mi.h1[i, j] != 0.0:
                out.append(fmt % (mi.h1[i, j], i + 1, j + 1, 0, 0))
    out.append(fmt % (mi.e_core, 0, 0, 0, 0))
    return "\n".join(out) + "\n"


@dataclass
class SpinOrbitalHamiltonian:
    """Second-quantized coefficients over spin orbitals.

    H = e_core + sum_pq h[p,q] a+_p a_q
             + 1/2 sum_pqrs g[p,q,r,s] a+_p a+_q a_r a_s
    """

    n_so: int
    h: np.ndarray
    g: np.ndarray
    e_core: float
    ordering: str = "interleaved"

    def validate(self, tol=1e-12):
        if np.abs(self.h - self.h.conj().T).max() > tol:
            raise ValueError("one-body block not Hermitian")
        if np.abs(self.g - self.g.conj().transpose(3, 2, 1, 0)).max() > tol:
            raise ValueError("two-body block breaks g_pqrs = conj(g_srqp)")
        return self


def spin_of(p: int, n_so: int, ordering: str = "interleaved") -> int:
    """0 for up, 1 for down."""
    if ordering == "interleaved":
        return p & 1
    return 0 if p < n_so // 2 else 1


def spatial_of(p: int, n_so: int, ordering: str = "interleaved") -> int:
    if ordering == "interleaved":
        return p >> 1
    return p if p < n_so // 2 else p - n_so // 2


def expand_spin_orbitals(mi: MolecularIntegrals, ordering: str = "interleaved") -> SpinOrbitalHamiltonian:
    """Expand spatial-orbital tables to spin-orbital coefficients."""
    n_so = 2 * mi.n_orb
    idx = np.arange(n_so)
    spatial = np.array([spatial_of(p, n_so, ordering) for p in idx])
    spin = np.array([spin_of(p, n_so, ordering) for p in idx])

    same = spin[:, None] == spin[None, :]
    h = mi.h1[np.ix_(spatial, spatial)] * same

    # g[p,q,r,s] = (P(p)P(s) | P(q)P(r)) under the spin deltas
    shuffled = mi.eri[np.ix_(spatial, spatial, spatial, spatial)]
    g = shuffled.transpose(0, 2, 3, 1) * same[:, None, None, :] * same[None, :, :, None]
    return SpinOrbitalHamiltonian(n_so, h, np.ascontiguousarray(g), mi.e_core, ordering).validate()


def hf_state_occupation(n_so: int, n_elec: int, ms2: int, ordering: str = "interleaved") -> int:
    """Aufbau occupation bitmask with the requested spin projection."""
    if n_elec > n_so:
        raise ValueError("more electrons than spin orbitals")
    if (n_elec + ms2) % 2 or (n_elec - ms2) % 2:
        raise ValueError(f"MS2={ms2} unreachable with {n_elec} electrons")
    n_up = (n_elec + ms2) // 2
    n_down = (n_elec - ms2) // 2
    if min(n_up, n_down) < 0 or max(n_up, n_down) > n_so // 2:
        raise ValueError(f"MS2={ms2} unreachable with {n_elec} electrons in {n_so} spin orbitals")
    mask = 0
    for i in range(n_up):
        mask |= 1 << (i * 2 if ordering == "interleaved" else i)
    for i in range(n_down):
        mask |= 1 << (i * 2 + 1 if ordering == "interleaved" else i + n_so // 2)
    return mask


def occ_list(mask: int) -> list[int]:
    out = []
    k = 0
    while mask >> k:
        if (mask >> k) & 1:
            out.append(k)
        k += 1
    return out


def determinant_energy(soh: SpinOrbitalHamiltonian, occ_mask: int) -> float:
    """<D|H|D> for the computational-basis determinant with the given occupation."""
    occ = occ_list(occ_mask)
    e = soh.e_core
    for p in occ:
        e += soh.h[p, p].real
    for p in occ:
        for q in occ:
            e += 0.5 * (soh.g[p, q, q, p] - soh.g[p, q, p, q]).real
    return float(e)


def hf_energy(soh: SpinOrbitalHamiltonian, occ_mask: int) -> float:
    return determinant_energy(soh, occ_mask)


def to_pauli_hamiltonian(soh: SpinOrbitalHamiltonian) -> PauliSum:
    """Jordan-Wigner qubit Hamiltonian; Hermitian with real coefficients."""
    n = soh.n_so
    acc: dict = {(0, 0): complex(soh.e_core)}

    def add(psum: PauliSum, coeff: complex):
        for key, c in psum.terms.items():
            acc[key] = acc.get(key, 0.0) + coeff * c

    for p, q in zip(*np.nonzero(np.abs(soh.h) > 1e-15)):
        add(jordan_wigner((("+", int(p)), ("-", int(q))), n), soh.h[p, q])
    for p, q, r, s in zip(*np.nonzero(np.abs(soh.g) > 1e-15)):
        add(
            jordan_wigner(
                (("+", int(p)), ("+", int(q)), ("-", int(r)), ("-", int(s))), n
            ),
            0.5 * soh.g[p, q, r, s],
        )
    ham = PauliSum(n, acc)
    if not ham.is_hermitian:
        raise ValueError("qubit Hamiltonian came out non-Hermitian")
    return ham

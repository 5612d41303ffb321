"""Operator pools: fermionic singles/doubles/triples, qubit excitations,
and one-variational-parameter couple exchange operators (OVP-CEOs).

Spin orbitals are interleaved (even = up, odd = down); spin projection is
conserved at enumeration time by matching parity sums. All generators G are
Hermitian, traceless, and satisfy G^3 = G, so exp(-i theta G) closes over
two applications of G.

Conventions. A fermionic excitation generator is written excitation-first,
G = i(a+_v1 a+_v2 ... a_o1 a_o2 ... - h.c.), which for a double reproduces
the standard eight-term XYYY/YXXX Jordan-Wigner pattern with its parity
string. Qubit excitations are the same operators with the standalone Z
letters (intervening-qubit parity factors) removed. The OVP-CEO pair for a
double quadruple (p,q)->(r,s) combines the qubit double with its
orbital-mixing partner (the qubit excitation exchanging one occupied and
one virtual index of matching spin): plus is the sum, minus the difference;
each collapses to four Pauli words with coefficients +-1/4.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .paulis import PauliSum, jordan_wigner

FERMIONIC_SINGLE = "fermionic_single"
FERMIONIC_DOUBLE = "fermionic_double"
FERMIONIC_TRIPLE = "fermionic_triple"
QUBIT_SINGLE = "qubit_single"
QUBIT_DOUBLE = "qubit_double"
OVP_CEO_PLUS = "ovp_ceo_plus"
OVP_CEO_MINUS = "ovp_ceo_minus"

SINGLE_KINDS = frozenset({FERMIONIC_SINGLE, QUBIT_SINGLE})
DOUBLE_KINDS = frozenset({FERMIONIC_DOUBLE, QUBIT_DOUBLE, OVP_CEO_PLUS, OVP_CEO_MINUS})
TRIPLE_KINDS = frozenset({FERMIONIC_TRIPLE})


@dataclass(frozen=True)
class Generator:
    """One pool element: Pauli form plus orbital indices and gate metadata."""

    kind: str
    orbitals: tuple
    pauli: PauliSum
    cnot_count: int
    depth: int

    @property
    def n_qubits(self):
        return self.pauli.n_qubits

    @property
    def key(self):
        return (self.kind, self.orbitals)

    def __str__(self):
        return f"{self.kind}{self.orbitals}"


@dataclass(frozen=True)
class Pool:
    generators: tuple
    n_qubits: int
    reference_occ: int

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    def doubles(self):
        return [g for g in self.generators if g.kind in DOUBLE_KINDS]

    def singles(self):
        return [g for g in self.generators if g.kind in SINGLE_KINDS]

    def triples(self):
        return [g for g in self.generators if g.kind in TRIPLE_KINDS]

    def index_of(self, key):
        for i, g in enumerate(self.generators):
            if g.key == key:
                return i
        raise KeyError(key)

    def to_json(self, indent=1):
        def word(x, z, nq):
            letters = []
            for k in range(nq):
                xb, zb = (x >> k) & 1, (z >> k) & 1
                if xb or zb:
                    letters.append(f"{'IXZY'[xb + 2 * zb] if xb + 2 * zb != 3 else 'Y'}{k}")
            return " ".join(letters) or "I"

        payload = {
            "n_qubits": self.n_qubits,
            "reference_occ": self.reference_occ,
            "size": len(self.generators),
            "generators": [
                {
                    "kind": g.kind,
                    "orbitals": list(g.orbitals),
                    "cnot_count": g.cnot_count,
                    "depth": g.depth,
                    "pauli": [
                        {"word": word(x, z, g.n_qubits), "coeff": c.real}
                        for (x, z), c in sorted(g.pauli.terms.items())
                    ],
                }
                for g in self.generators
            ],
        }
        return json.dumps(payload, indent=indent, sort_keys=True)


def _hermitized(ops, n_qubits, strip=False):
    """i(T - T+) for the ladder monomial T, with G^3 = G by construction."""
    t = jordan_wigner(ops, n_qubits)
    g = 1j * (t - t.adjoint())
    if strip:
        g = _strip_z(g)
    if not g.is_hermitian or (0, 0) in g.terms:
        raise AssertionError("generator must be Hermitian and traceless")
    return g


def _strip_z(psum):
    """Drop standalone Z letters (keep X and Y) from every word."""
    terms = {}
    for (x, z), c in psum.terms.items():
        key = (x, z & x)
        terms[key] = terms.get(key, 0.0) + c
    return PauliSum(psum.n_qubits, terms)


def _standalone_z_count(psum):
    return max(((z & ~x).bit_count() for (x, z) in psum.terms), default=0)


def _excitation_ops(occupied, virtual):
    return tuple([("+", v) for v in virtual] + [("-", o) for o in occupied])


def fermionic_excitation(occupied, virtual, n_qubits, kind=None):
    occupied, virtual = tuple(occupied), tuple(virtual)
    pauli = _hermitized(_excitation_ops(occupied, virtual), n_qubits)
    nz = _standalone_z_count(pauli)
    order = len(occupied)
    if order == 1:
        kind = kind or FERMIONIC_SINGLE
        cnots, depth = 2 + 2 * nz, 2 + 2 * nz
    elif order == 2:
        kind = kind or FERMIONIC_DOUBLE
        cnots, depth = 13 + 2 * nz, 11 + 2 * nz
    else:
        kind = kind or FERMIONIC_TRIPLE
        # staircase exponentiation estimate: 2(weight-1) CNOTs per word
        cnots = sum(2 * ((x | z).bit_count() - 1) for (x, z) in pauli.terms)
        depth = cnots
    return Generator(kind, occupied + virtual, pauli, cnots, depth)


def qubit_single(p, q, n_qubits):
    pauli = _hermitized((("+", q), ("-", p)), n_qubits, strip=True)
    return Generator(QUBIT_SINGLE, (p, q), pauli, 2, 2)


def qe_double(orbitals, n_qubits):
    """Qubit double excitation: eight words, +-1/8, no parity strings."""
    p, q, r, s = orbitals
    if len({p, q, r, s}) != 4:
        raise ValueError("qubit double needs four distinct orbitals")
    pauli = _hermitized((("+", r), ("+", s), ("-", p), ("-", q)), n_qubits, strip=True)
    return Generator(QUBIT_DOUBLE, (p, q, r, s), pauli, 13, 11)


def _ovp_partner_ops(p, q, r, s):
    """The orbital-mixing qubit excitation paired with (p,q)->(r,s)."""
    if (p + r) % 2 == 0:
        # exchange within the equal-spin pair (p, r): moves (p, s) -> (q, r)
        return (("+", q), ("+", r), ("-", p), ("-", s))
    # spins pair as (p, s)/(q, r): moves (q, s) -> (p, r)
    return (("+", p), ("+", r), ("-", q), ("-", s))


def ovp_ceo(orbitals, n_qubits, sign):
    """OVP-CEO as sum (+1) or difference (-1) of the two paired qubit doubles."""
    p, q, r, s = orbitals
    base = _hermitized((("+", r), ("+", s), ("-", p), ("-", q)), n_qubits, strip=True)
    partner = _hermitized(_ovp_partner_ops(p, q, r, s), n_qubits, strip=True)
    pauli = base + partner if sign > 0 else base - partner
    if pauli.n_terms != 4:
        raise AssertionError("OVP-CEO must collapse to four Pauli words")
    kind = OVP_CEO_PLUS if sign > 0 else OVP_CEO_MINUS
    return Generator(kind, (p, q, r, s), pauli, 9, 7)


def _occ_virt(n_so, occ_mask):
    occupied = [k for k in range(n_so) if (occ_mask >> k) & 1]
    virtual = [k for k in range(n_so) if not (occ_mask >> k) & 1]
    return occupied, virtual


def enumerate_singles(n_so, occ_mask):
    occupied, virtual = _occ_virt(n_so, occ_mask)
    return [
        (p, q) for p in occupied for q in virtual if p % 2 == q % 2
    ]


def enumerate_doubles(n_so, occ_mask):
    occupied, virtual = _occ_virt(n_so, occ_mask)
    quads = []
    for i, p in enumerate(occupied):
        for q in occupied[i + 1:]:
            for j, r in enumerate(virtual):
                for s in virtual[j + 1:]:
                    if (p % 2 + q % 2) == (r % 2 + s % 2):
                        quads.append((p, q, r, s))
    return sorted(quads)


def enumerate_triples(n_so, occ_mask):
    occupied, virtual = _occ_virt(n_so, occ_mask)
    out = []
    no, nv = len(occupied), len(virtual)
    for a in range(no):
        for b in range(a + 1, no):
            for c in range(b + 1, no):
                o = (occupied[a], occupied[b], occupied[c])
                so = sum(k % 2 for k in o)
                for x in range(nv):
                    for y in range(x + 1, nv):
                        for z in range(y + 1, nv):
                            v = (virtual[x], virtual[y], virtual[z])
                            if sum(k % 2 for k in v) == so:
                                out.append(o + v)
    return sorted(out)


def build_uccsd_pool(n_so, occ_mask) -> Pool:
    """All spin-projection-preserving fermionic doubles, then singles."""
    gens = [
        fermionic_excitation((p, q), (r, s), n_so)
        for p, q, r, s in enumerate_doubles(n_so, occ_mask)
    ]
    gens += [
        fermionic_excitation((p,), (q,), n_so)
        for p, q in enumerate_singles(n_so, occ_mask)
    ]
    return Pool(tuple(gens), n_so, occ_mask)


def extend_with_triples(pool: Pool) -> Pool:
    """Append all spin-projection-preserving fermionic triples."""
    if any(g.kind not in (FERMIONIC_DOUBLE, FERMIONIC_SINGLE, FERMIONIC_TRIPLE) for g in pool):
        raise ValueError("triples extend a fermionic (UCCSD) pool")
    gens = [g for g in pool.generators if g.kind != FERMIONIC_TRIPLE]
    gens += [
        fermionic_excitation(t[:3], t[3:], pool.n_qubits)
        for t in enumerate_triples(pool.n_qubits, pool.reference_occ)
    ]
    return Pool(tuple(gens), pool.n_qubits, pool.reference_occ)


def build_qe_pool(n_so, occ_mask) -> Pool:
    """Qubit doubles then qubit singles, same enumeration as UCCSD."""
    gens = [qe_double(q, n_so) for q in enumerate_doubles(n_so, occ_mask)]
    gens += [qubit_single(p, q, n_so) for p, q in enumerate_singles(n_so, occ_mask)]
    return Pool(tuple(gens), n_so, occ_mask)


def build_ovp_ceo_pool(n_so, occ_mask, variant="plus_and_minus") -> Pool:
    """OVP-CEO doubles (one +, optionally one -, per quadruple) plus qubit singles."""
    if variant not in ("plus_only", "plus_and_minus"):
        raise ValueError(f"unknown variant {variant!r}")
    gens = []
    for quad in enumerate_doubles(n_so, occ_mask):
        gens.append(ovp_ceo(quad, n_so, +1))
        if variant == "plus_and_minus":
            gens.append(ovp_ceo(quad, n_so, -1))
    gens += [qubit_single(p, q, n_so) for p, q in enumerate_singles(n_so, occ_mask)]
    return Pool(tuple(gens), n_so, occ_mask)


def build_pool(name, n_so, occ_mask) -> Pool:
    if name == "uccsd":
        return build_uccsd_pool(n_so, occ_mask)
    if name == "uccsdt":
        return extend_with_triples(build_uccsd_pool(n_so, occ_mask))
    if name == "qe":
        return build_qe_pool(n_so, occ_mask)
    if name == "ovp_ceo":
        return build_ovp_ceo_pool(n_so, occ_mask)
    raise ValueError(f"unknown pool {name!r}")


def sz_operator(n_qubits) -> PauliSum:
    """Spin projection Sz = (N_up - N_down) / 2 over interleaved orbitals."""
    acc = {}
    for k in range(n_qubits):
        sign = 0.25 if k % 2 == 0 else -0.25
        acc[(0, 0)] = acc.get((0, 0), 0.0) + sign
        acc[(0, 1 << k)] = acc.get((0, 1 << k), 0.0) - sign
    return PauliSum(n_qubits, acc)

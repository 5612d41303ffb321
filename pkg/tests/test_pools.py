import itertools

import numpy as np
import pytest

from vqesweep import kernels
from vqesweep.integrals import hf_state_occupation
from vqesweep.paulis import PauliSum
from vqesweep.pools import (
    OVP_CEO_MINUS,
    OVP_CEO_PLUS,
    build_ovp_ceo_pool,
    build_qe_pool,
    build_uccsd_pool,
    enumerate_doubles,
    extend_with_triples,
    fermionic_excitation,
    ovp_ceo,
    qe_double,
    sz_operator,
)


def brute_force_doubles(n_so, occ_mask):
    """Independent enumeration: every ordered-canonical quadruple with
    matching spin projection."""
    occupied = [k for k in range(n_so) if occ_mask >> k & 1]
    virtual = [k for k in range(n_so) if not occ_mask >> k & 1]
    quads = set()
    for p, q in itertools.combinations(occupied, 2):
        for r, s in itertools.combinations(virtual, 2):
            removed = (p % 2) + (q % 2)
            added = (r % 2) + (s % 2)
            if removed == added:
                quads.add((p, q, r, s))
    return quads


def brute_force_singles(n_so, occ_mask):
    occupied = [k for k in range(n_so) if occ_mask >> k & 1]
    virtual = [k for k in range(n_so) if not occ_mask >> k & 1]
    return {(p, q) for p in occupied for q in virtual if (p - q) % 2 == 0}


def brute_force_triples(n_so, occ_mask):
    occupied = [k for k in range(n_so) if occ_mask >> k & 1]
    virtual = [k for k in range(n_so) if not occ_mask >> k & 1]
    out = set()
    for trio_o in itertools.combinations(occupied, 3):
        for trio_v in itertools.combinations(virtual, 3):
            if sum(k % 2 for k in trio_o) == sum(k % 2 for k in trio_v):
                out.add(trio_o + trio_v)
    return out


def test_h2_pool_contents():
    occ = hf_state_occupation(4, 2, 0)
    pool = build_uccsd_pool(4, occ)
    assert len(pool) == 3
    assert [g.kind for g in pool] == [
        "fermionic_double", "fermionic_single", "fermionic_single"]
    assert {g.orbitals for g in pool.doubles()} == brute_force_doubles(4, occ)
    assert {g.orbitals for g in pool.singles()} == brute_force_singles(4, occ)


def test_lih_pool_size():
    occ = hf_state_occupation(12, 4, 0)
    pool = build_uccsd_pool(12, occ)
    assert len(pool) == 92
    assert len(pool.doubles()) == 76 and len(pool.singles()) == 16


def test_full_occupation_gives_empty_pool():
    occ = hf_state_occupation(4, 4, 0)
    assert len(build_uccsd_pool(4, occ)) == 0


def test_pool_enumeration_matches_brute_force():
    for n_so, n_elec in [(4, 2), (6, 2), (8, 4), (12, 4), (16, 6)]:
        occ = hf_state_occupation(n_so, n_elec, 0)
        assert set(enumerate_doubles(n_so, occ)) == brute_force_doubles(n_so, occ)


def test_doubles_growth_formula():
    # closed-shell counts: same-spin pairs twice plus opposite-spin products
    for n_so, n_elec in [(8, 4), (12, 4), (12, 6), (16, 8)]:
        occ = hf_state_occupation(n_so, n_elec, 0)
        o = n_elec // 2
        v = n_so // 2 - o
        expected = 2 * ((o * (o - 1) // 2) * (v * (v - 1) // 2)) + (o * o) * (v * v)
        assert len(enumerate_doubles(n_so, occ)) == expected


def test_triples():
    occ_h2 = hf_state_occupation(4, 2, 0)
    pool = extend_with_triples(build_uccsd_pool(4, occ_h2))
    assert len(pool.triples()) == 0  # needs three electrons per spin pattern
    assert len(brute_force_triples(4, occ_h2)) == 0

    occ = hf_state_occupation(12, 4, 0)
    pool = extend_with_triples(build_uccsd_pool(12, occ))
    assert {g.orbitals for g in pool.triples()} == brute_force_triples(12, occ)
    again = extend_with_triples(build_uccsd_pool(12, occ))
    assert [g.key for g in again] == [g.key for g in pool]


def test_deterministic_ordering():
    occ = hf_state_occupation(8, 4, 0)
    a = build_uccsd_pool(8, occ)
    b = build_uccsd_pool(8, occ)
    assert [g.key for g in a] == [g.key for g in b]
    assert len({g.key for g in a}) == len(a)  # no duplicates


def _g3_equals_g_dense(gen):
    m = gen.pauli.matrix()
    return (
        np.abs(m @ m @ m - m).max() < 1e-12
        and np.abs(m - m.conj().T).max() < 1e-12
        and abs(np.trace(m)) < 1e-12
    )


def test_generator_cube_identity_small():
    occ4 = hf_state_occupation(4, 2, 0)
    occ8 = hf_state_occupation(8, 4, 0)
    gens = (
        list(build_uccsd_pool(4, occ4))
        + list(build_qe_pool(4, occ4))
        + list(build_ovp_ceo_pool(4, occ4))
        + list(extend_with_triples(build_uccsd_pool(8, occ8)))[:12]
    )
    for gen in gens:
        assert _g3_equals_g_dense(gen), gen


def test_generator_cube_identity_spot_check_12_qubits():
    # too large for dense matrices: check G^3 v == G v on random vectors
    occ = hf_state_occupation(12, 4, 0)
    pool = build_ovp_ceo_pool(12, occ)
    rng = np.random.default_rng(5)
    picks = rng.choice(len(pool), size=6, replace=False)
    v = rng.normal(size=1 << 12) + 1j * rng.normal(size=1 << 12)
    for i in picks:
        xs, zs, ws = pool[int(i)].pauli.kernel_arrays()
        g1 = kernels.apply_sum(v, xs, zs, ws)
        g3 = kernels.apply_sum(kernels.apply_sum(g1, xs, zs, ws), xs, zs, ws)
        assert np.abs(g3 - g1).max() < 1e-12


def test_sz_conservation():
    occ = hf_state_occupation(6, 2, 0)
    sz = sz_operator(6).matrix()
    for gen in build_uccsd_pool(6, occ):
        m = gen.pauli.matrix()
        assert np.abs(m @ sz - sz @ m).max() < 1e-12, gen


def test_ovp_ceo_structure():
    occ = hf_state_occupation(4, 2, 0)
    pool = build_ovp_ceo_pool(4, occ, "plus_and_minus")
    plus = [g for g in pool if g.kind == OVP_CEO_PLUS]
    minus = [g for g in pool if g.kind == OVP_CEO_MINUS]
    assert len(plus) == len(minus) == 1
    for g in plus + minus:
        assert g.pauli.n_terms == 4
        assert all(abs(abs(c.real) - 0.25) < 1e-14 for c in g.pauli.terms.values())
        assert (g.cnot_count, g.depth) == (9, 7)
        support = set()
        for x, z in g.pauli.terms:
            assert z & ~x == 0  # no parity strings
            support |= {k for k in range(4) if (x >> k) & 1}
        assert support == set(g.orbitals)


def test_ovp_pool_size_relation():
    occ = hf_state_occupation(12, 4, 0)
    uccsd = build_uccsd_pool(12, occ)
    both = build_ovp_ceo_pool(12, occ, "plus_and_minus")
    only = build_ovp_ceo_pool(12, occ, "plus_only")
    n_doubles = len(uccsd.doubles())
    n_singles = len(uccsd.singles())
    assert len(both) == 2 * n_doubles + n_singles
    assert len(only) == n_doubles + n_singles


def test_ovp_sum_relation_and_hf_action():
    for quad, n in [((0, 1, 2, 3), 4), ((0, 1, 4, 5), 6), ((0, 2, 4, 6), 8)]:
        gp = ovp_ceo(quad, n, +1)
        gm = ovp_ceo(quad, n, -1)
        qe = qe_double(quad, n)
        assert ((gp.pauli + gm.pauli) - 2.0 * qe.pauli).n_terms == 0
        occ_mask = (1 << quad[0]) | (1 << quad[1])
        target = occ_mask | (1 << quad[2]) | (1 << quad[3])
        target ^= occ_mask  # p,q emptied, r,s filled
        amps = {}
        for name, g in (("+", gp), ("-", gm), ("qe", qe)):
            action = g.pauli.apply_to_basis(occ_mask)
            assert set(action) == {target}, (name, quad)
            amps[name] = action[target]
        assert abs(abs(amps["+"]) - 1.0) < 1e-14
        assert abs(amps["+"] - amps["qe"]) < 1e-14 or abs(amps["+"] + amps["qe"]) < 1e-14
        assert abs(amps["-"] - amps["qe"]) < 1e-14 or abs(amps["-"] + amps["qe"]) < 1e-14


def test_qe_double_properties():
    gen = qe_double((0, 1, 2, 3), 4)
    assert gen.pauli.n_terms == 8
    assert all(abs(abs(c.real) - 0.125) < 1e-14 for c in gen.pauli.terms.values())
    m = gen.pauli.matrix()
    # couples |0011> and |1100> and nothing else from those columns
    col = m[:, 0b0011]
    assert np.abs(np.delete(col, 0b1100)).max() < 1e-14
    assert abs(abs(col[0b1100]) - 1.0) < 1e-14
    assert np.linalg.matrix_rank(m, tol=1e-10) == 2
    with pytest.raises(ValueError):
        qe_double((0, 1, 1, 3), 4)


def test_qe_vs_fermionic_parity_strings():
    # with intervening qubits the two differ exactly by the parity Z factors
    quad = (0, 1, 2, 5)
    n = 6
    qe = qe_double(quad, n)
    ferm = fermionic_excitation(quad[:2], quad[2:], n)
    zmask = 0
    for j in quad:
        zmask ^= (1 << j) - 1
    zmask &= ~((1 << quad[0]) | (1 << quad[1]) | (1 << quad[2]) | (1 << quad[3]))
    parity = PauliSum(n, {(0, zmask): 1.0})
    assert (ferm.pauli - qe.pauli * parity).n_terms == 0
    assert np.abs(
        ferm.pauli.matrix() - qe.pauli.matrix() @ parity.matrix()
    ).max() < 1e-14


def test_cnot_metadata():
    occ = hf_state_occupation(4, 2, 0)
    qe = build_qe_pool(4, occ)
    assert all((g.cnot_count, g.depth) == (13, 11) for g in qe.doubles())
    assert all((g.cnot_count, g.depth) == (2, 2) for g in qe.singles())
    ovp = build_ovp_ceo_pool(4, occ)
    assert all((g.cnot_count, g.depth) == (9, 7) for g in ovp.doubles())


def test_pool_json_roundtrip():
    import json

    occ = hf_state_occupation(4, 2, 0)
    payload = json.loads(build_uccsd_pool(4, occ).to_json())
    assert payload["size"] == 3
    assert payload["generators"][0]["kind"] == "fermionic_double"
    assert len(payload["generators"][0]["pauli"]) == 8

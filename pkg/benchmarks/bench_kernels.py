#!/usr/bin/env python3
"""Benchmark the compiled amplitude kernels against the numpy fallback.

Measures the two primitives (sparse-sum application and expectation) on
synthetic workloads sized like the fixture molecules, then one end-to-end
selection sweep. Run after building the extension:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

import vqesweep.kernels as kernels
from vqesweep.kernels import py_backend

try:
    from vqesweep.kernels import _fast
except ImportError:
    _fast = None


def timeit(fn, *args, repeats=30):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def synthetic(n_qubits, n_terms, seed=0):
    rng = np.random.default_rng(seed)
    dim = 1 << n_qubits
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    amps /= np.linalg.norm(amps)
    xs = rng.integers(0, dim, size=n_terms).astype(np.uint64)
    zs = rng.integers(0, dim, size=n_terms).astype(np.uint64)
    ws = rng.normal(size=n_terms) + 0j
    return amps, xs, zs, ws


def bench_primitives():
    print(f"active backend: {kernels.BACKEND}")
    if _fast is None:
        print("compiled extension not built; showing numpy fallback only\n")
    cases = [
        ("H2-ish   (4 qubits, 15 terms)", 4, 15),
        ("H4-ish   (8 qubits, 185 terms)", 8, 185),
        ("LiH-ish  (12 qubits, 631 terms)", 12, 631),
        ("H2O-ish  (14 qubits, 1086 terms)", 14, 1086),
        ("large    (18 qubits, 2000 terms)", 18, 2000),
    ]
    header = f"{'case':34s} {'numpy apply':>12s} {'fast apply':>12s} {'speedup':>8s}   {'numpy <H>':>12s} {'fast <H>':>12s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for name, n, t in cases:
        amps, xs, zs, ws = synthetic(n, t)
        repeats = 5 if n >= 14 else 30
        t_py_a = timeit(py_backend.apply_sum, amps, xs, zs, ws, repeats=repeats)
        t_py_e = timeit(py_backend.expect_sum, amps, xs, zs, ws, repeats=repeats)
        if _fast is not None:
            t_f_a = timeit(_fast.apply_sum, amps, xs, zs, ws, repeats=repeats)
            t_f_e = timeit(_fast.expect_sum, amps, xs, zs, ws, repeats=repeats)
            err = np.abs(
                _fast.apply_sum(amps, xs, zs, ws) - py_backend.apply_sum(amps, xs, zs, ws)
            ).max()
            assert err < 1e-12, f"backends disagree by {err}"
            print(
                f"{name:34s} {t_py_a*1e3:10.2f}ms {t_f_a*1e3:10.2f}ms {t_py_a/t_f_a:7.1f}x"
                f"   {t_py_e*1e3:10.2f}ms {t_f_e*1e3:10.2f}ms {t_py_e/t_f_e:7.1f}x"
            )
        else:
            print(f"{name:34s} {t_py_a*1e3:10.2f}ms {'-':>12s} {'-':>8s}   {t_py_e*1e3:10.2f}ms")


def bench_end_to_end():
    import os

    from vqesweep.integrals import (
        expand_spin_orbitals, hf_state_occupation, parse_fcidump, to_pauli_hamiltonian)
    from vqesweep.pools import build_uccsd_pool
    from vqesweep.selection import build_ansatz_energy_sorting
    from vqesweep.simulator import prepare_basis_state

    path = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures", "h4_0.90.fcidump")
    if not os.path.exists(path):
        print("\nfixtures not found; skipping end-to-end benchmark")
        return
    with open(path) as fh:
        mi = parse_fcidump(fh.read())
    soh = expand_spin_orbitals(mi)
    occ = hf_state_occupation(soh.n_so, mi.n_elec, mi.ms2)
    ham = to_pauli_hamiltonian(soh)
    pool = build_uccsd_pool(soh.n_so, occ)

    def one_build():
        state = prepare_basis_state(soh.n_so, occ)
        build_ansatz_energy_sorting(pool, ham, state, soh=soh)

    elapsed = timeit(one_build, repeats=3)
    print(f"\nH4 energy-sorting build (selection + optimization + screening): {elapsed:.3f}s")


if __name__ == "__main__":
    bench_primitives()
    bench_end_to_end()

# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled amplitude kernels: one bit-twiddling pass per Pauli word.

Must return the same values as py_backend at the 1e-12 comparison level;
the pass order over terms and amplitudes is fixed, so results are
independent of how callers partition work.
"""

import numpy as np

from libc.stdint cimport uint64_t

cdef extern from *:
    """
    #if defined(_MSC_VER)
    #include <intrin.h>
    #define VQS_POPCOUNT64 __popcnt64
    #else
    #define VQS_POPCOUNT64 __builtin_popcountll
    #endif
    """
    int VQS_POPCOUNT64(unsigned long long) nogil


def apply_sum(double complex[::1] amps, uint64_t[::1] xs, uint64_t[::1] zs,
              double complex[::1] ws):
    """Return sum_t w_t P_t |amps> as a new array."""
    cdef Py_ssize_t n = amps.shape[0]
    cdef Py_ssize_t nterms = xs.shape[0]
    out_arr = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t t, j
    cdef uint64_t x, z, src
    cdef double complex w
    with nogil:
        for t in range(nterms):
            x = xs[t]
            z = zs[t]
            w = ws[t]
            for j in range(n):
                src = (<uint64_t> j) ^ x
                if VQS_POPCOUNT64(src & z) & 1:
                    out[j] = out[j] - w * amps[src]
                else:
                    out[j] = out[j] + w * amps[src]
    return out_arr


def expect_sum(double complex[::1] amps, uint64_t[::1] xs, uint64_t[::1] zs,
               double complex[::1] ws):
    """Return sum_t w_t <amps| P_t |amps> as a Python complex."""
    cdef Py_ssize_t n = amps.shape[0]
    cdef Py_ssize_t nterms = xs.shape[0]
    cdef Py_ssize_t t, j
    cdef uint64_t x, z, src
    cdef double complex w, term, acc
    acc = 0
    with nogil:
        for t in range(nterms):
            x = xs[t]
            z = zs[t]
            w = ws[t]
            term = 0
            for j in range(n):
                src = (<uint64_t> j) ^ x
                if VQS_POPCOUNT64(src & z) & 1:
                    term = term - amps[j].conjugate() * amps[src]
                else:
                    term = term + amps[j].conjugate() * amps[src]
            acc = acc + w * term
    return complex(acc)

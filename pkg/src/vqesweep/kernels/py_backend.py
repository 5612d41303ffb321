"""Pure-numpy amplitude kernels, the fallback when the extension is absent.

Each Pauli word acts on a 2^n state vector as one gather-and-sign pass:
out[j] += w * (-1)^parity((j^x) & z) * amps[j^x]. Results must agree with
the compiled backend bit-for-bit at the 1e-12 comparison level.
"""

import numpy as np

_INDEX_CACHE: dict[int, np.ndarray] = {}


def _indices(n: int) -> np.ndarray:
    idx = _INDEX_CACHE.get(n)
    if idx is None:
        idx = np.arange(n, dtype=np.uint64)
        _INDEX_CACHE[n] = idx
    return idx


def _signs(masked: np.ndarray) -> np.ndarray:
    return 1.0 - 2.0 * (np.bitwise_count(masked) & np.uint64(1)).astype(np.float64)


def apply_sum(amps, xs, zs, ws):
    """Return sum_t w_t P_t |amps> as a new array."""
    n = amps.shape[0]
    idx = _indices(n)
    out = np.zeros(n, dtype=np.complex128)
    for t in range(xs.shape[0]):
        src = idx ^ xs[t]
        out += (ws[t] * _signs(src & zs[t])) * amps[src]
    return out


def expect_sum(amps, xs, zs, ws):
    """Return sum_t w_t <amps| P_t |amps> (complex; imag ~ 0 for Hermitian sums)."""
    n = amps.shape[0]
    idx = _indices(n)
    conj = amps.conj()
    acc = 0.0 + 0.0j
    for t in range(xs.shape[0]):
        src = idx ^ xs[t]
        acc += ws[t] * np.dot(conj * _signs(src & zs[t]), amps[src])
    return acc

"""Sparse Pauli-string algebra on bitmasks, with Jordan-Wigner helpers.

Qubit 0 is the least significant bit of a basis-state index throughout the
package. A Pauli word is stored as an (x_mask, z_mask) pair: qubit k carries
X if only bit k of x_mask is set, Z if only bit k of z_mask is set, Y if
both, identity if neither.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

COEFF_TOL = 1e-14  # below accumulation noise, above denormals

_PAULI_LETTERS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def _word_phase_exponent(xa, za, xb, zb):
    """Power of i picked up when multiplying two Pauli words (no global phases).

    Words are i^|x&z| X^x Z^z; commuting Z^za past X^xb gives the (-1) factor.
    """
    xc, zc = xa ^ xb, za ^ zb
    k = (xa & za).bit_count() + (xb & zb).bit_count() - (xc & zc).bit_count()
    k += 2 * (za & xb).bit_count()
    return k % 4


def word_action(x_mask: int, z_mask: int, basis: int) -> tuple[int, complex]:
    """Apply the literal word (x_mask, z_mask) to basis state |basis>.

    Returns (new_basis, coeff) with word|basis> = coeff |new_basis>.
    """
    coeff = 1j ** ((x_mask & z_mask).bit_count() % 4)
    if (basis & z_mask).bit_count() & 1:
        coeff = -coeff
    return basis ^ x_mask, coeff


@dataclass(frozen=True)
class PauliString:
    """A single n-qubit Pauli word with a global phase in {1, i, -1, -i}."""

    n_qubits: int
    x_mask: int = 0
    z_mask: int = 0
    phase: complex = 1 + 0j

    def __post_init__(self):
        lim = 1 << self.n_qubits
        if not (0 <= self.x_mask < lim and 0 <= self.z_mask < lim):
            raise ValueError("mask out of range for qubit count")
        if self.phase not in (1, 1j, -1, -1j):
            raise ValueError(f"phase must be a fourth root of unity, got {self.phase}")

    @classmethod
    def from_ops(cls, n_qubits, ops, phase=1 + 0j):
        """Build from [(letter, qubit), ...] pairs, e.g. [("X", 0), ("Z", 2)]."""
        x = z = 0
        for letter, k in ops:
            bx, bz = _PAULI_LETTERS[letter.upper()]
            if (x | z) & (1 << k):
                raise ValueError(f"qubit {k} assigned twice")
            x |= bx << k
            z |= bz << k
        return cls(n_qubits, x, z, complex(phase))

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit-count mismatch")
        k = _word_phase_exponent(self.x_mask, self.z_mask, other.x_mask, other.z_mask)
        return PauliString(
            self.n_qubits,
            self.x_mask ^ other.x_mask,
            self.z_mask ^ other.z_mask,
            self.phase * other.phase * (1j**k),
        )

    def letter(self, k: int) -> str:
        x = (self.x_mask >> k) & 1
        z = (self.z_mask >> k) & 1
        return "IXZY"[x + 2 * z] if x + 2 * z != 3 else "Y"

    def weight(self) -> int:
        return (self.x_mask | self.z_mask).bit_count()

    def apply_to_basis(self, basis: int) -> tuple[int, complex]:
        b, c = word_action(self.x_mask, self.z_mask, basis)
        return b, self.phase * c

    def matrix(self) -> np.ndarray:
        return PauliSum(self.n_qubits, {(self.x_mask, self.z_mask): self.phase}).matrix()

    def __str__(self):
        ops = " ".join(
            f"{self.letter(k)}{k}"
            for k in range(self.n_qubits)
            if (self.x_mask | self.z_mask) >> k & 1
        )
        return f"{self.phase} · {ops or 'I'}"


class PauliSum:
    """Sparse real- or complex-weighted sum of n-qubit Pauli words.

    Terms map (x_mask, z_mask) to the coefficient of the literal word (the
    tensor product of I/X/Y/Z letters, no extra phase). Instances are treated
    as immutable; all operations return new sums with |c| < 1e-14 dropped.
    """

    __slots__ = ("n_qubits", "terms", "_arrays", "_hermitian")

    def __init__(self, n_qubits: int, terms: dict | None = None):
        self.n_qubits = n_qubits
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if abs(c) >= COEFF_TOL:
                    self.terms[key] = complex(c)
        self._arrays = None
        self._hermitian = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n_qubits):
        return cls(n_qubits)

    @classmethod
    def identity(cls, n_qubits, coeff=1.0):
        return cls(n_qubits, {(0, 0): coeff})

    @classmethod
    def from_string(cls, ps: PauliString, coeff=1.0):
        return cls(ps.n_qubits, {(ps.x_mask, ps.z_mask): coeff * ps.phase})

    # -- linear algebra ------------------------------------------------
    def _check(self, other):
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit-count mismatch")

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, 0.0) + c
        return PauliSum(self.n_qubits, terms)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __rmul__(self, scalar) -> "PauliSum":
        return PauliSum(
            self.n_qubits, {key: scalar * c for key, c in self.terms.items()}
        )

    def __mul__(self, other):
        """Operator product with another sum, or scaling by a number."""
        if not isinstance(other, PauliSum):
            return other * self
        self._check(other)
        terms = {}
        for (xa, za), ca in self.terms.items():
            for (xb, zb), cb in other.terms.items():
                k = _word_phase_exponent(xa, za, xb, zb)
                key = (xa ^ xb, za ^ zb)
                terms[key] = terms.get(key, 0.0) + ca * cb * (1j**k)
        return PauliSum(self.n_qubits, terms)

    def adjoint(self) -> "PauliSum":
        # literal words are Hermitian, so only coefficients conjugate
        return PauliSum(self.n_qubits, {k: c.conjugate() for k, c in self.terms.items()})

    @property
    def n_terms(self):
        return len(self.terms)

    @property
    def is_hermitian(self) -> bool:
        if self._hermitian is None:
            self._hermitian = all(abs(c.imag) < 1e-12 for c in self.terms.values())
        return self._hermitian

    def __eq__(self, other):
        if not isinstance(other, PauliSum) or self.n_qubits != other.n_qubits:
            return NotImplemented
        return (self - other).n_terms == 0

    def __hash__(self):
        return hash((self.n_qubits, frozenset(self.terms)))

    # -- evaluation ----------------------------------------------------
    def kernel_arrays(self):
        """(xs, zs, ws) uint64/complex arrays with Y phases folded into ws."""
        if self._arrays is None:
            n = len(self.terms)
            xs = np.empty(n, dtype=np.uint64)
            zs = np.empty(n, dtype=np.uint64)
            ws = np.empty(n, dtype=np.complex128)
            for i, ((x, z), c) in enumerate(sorted(self.terms.items())):
                xs[i] = x
                zs[i] = z
                ws[i] = c * 1j ** ((x & z).bit_count() % 4)
            self._arrays = (xs, zs, ws)
        return self._arrays

    def apply_to_basis(self, basis: int) -> dict[int, complex]:
        """Exact action on one computational-basis state, |b> -> {b': amp}."""
        out = {}
        for (x, z), c in self.terms.items():
            b, w = word_action(x, z, basis)
            out[b] = out.get(b, 0.0) + c * w
        return {b: a for b, a in out.items() if abs(a) >= COEFF_TOL}

    def matrix(self) -> np.ndarray:
        """Dense matrix; refused above 14 qubits (test/validation scale only)."""
        if self.n_qubits > 14:
            raise ValueError("dense matrix is limited to 14 qubits")
        dim = 1 << self.n_qubits
        idx = np.arange(dim)
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for (x, z), c in self.terms.items():
            w = c * 1j ** ((x & z).bit_count() % 4)
            signs = np.where(bit_parity(idx & z), -1.0, 1.0)
            mat[idx ^ x, idx] += w * signs
        return mat

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (x, z), c in sorted(self.terms.items()):
            ops = " ".join(
                f"{PauliString(self.n_qubits, x, z).letter(k)}{k}"
                for k in range(self.n_qubits)
                if (x | z) >> k & 1
            )
            cval = c.real if abs(c.imag) < COEFF_TOL else c
            parts.append(f"{cval:g} · {ops or 'I'}")
        return " + ".join(parts)

    __repr__ = __str__


def bit_parity(values: np.ndarray) -> np.ndarray:
    """Parity (0/1) of the set bits of each entry of an unsigned array."""
    return (np.bitwise_count(values) & 1).astype(bool)


# -- Jordan-Wigner ------------------------------------------------------

def jordan_wigner(ops, n_qubits: int) -> PauliSum:
    """Map a product of ladder operators to a Pauli sum.

    `ops` is a sequence of ("+"|"-", spin_orbital) pairs, "+" for creation,
    applied left to right as written (leftmost acts last on a ket). Each
    factor carries the parity string Z_0..Z_{p-1}.
    """
    result = PauliSum.identity(n_qubits)
    for kind, p in ops:
        if not 0 <= p < n_qubits:
            raise IndexError(f"spin orbital {p} out of range for {n_qubits} qubits")
        below = (1 << p) - 1
        sign = -0.5j if kind == "+" else 0.5j
        factor = PauliSum(
            n_qubits,
            {(1 << p, below): 0.5, (1 << p, below | (1 << p)): sign},
        )
        result = result * factor
    return result


def qubit_ladder(ops, n_qubits: int) -> PauliSum:
    """Same as jordan_wigner but with the parity strings stripped.

    Q+ = (X - iY)/2 and Q- = (X + iY)/2 act on their qubit alone.
    """
    result = PauliSum.identity(n_qubits)
    for kind, p in ops:
        if not 0 <= p < n_qubits:
            raise IndexError(f"qubit {p} out of range for {n_qubits} qubits")
        sign = -0.5j if kind == "+" else 0.5j
        factor = PauliSum(n_qubits, {(1 << p, 0): 0.5, (1 << p, 1 << p): sign})
        result = result * factor
    return result


def number_operator(p: int, n_qubits: int) -> PauliSum:
    """Occupation a+_p a_p = (I - Z_p)/2."""
    return PauliSum(n_qubits, {(0, 0): 0.5, (0, 1 << p): -0.5})

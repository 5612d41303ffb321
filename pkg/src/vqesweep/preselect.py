"""Closed-form energy impact of first-layer excitations, straight from
integrals, at zero quantum cost.

Acting on a computational-basis reference, a double (or single) excitation
rotates within the two-state subspace {|psi0>, |psi1>}, so
dE(theta) = a [1 - cos(2 theta)] - nu b sin(2 theta)
with a half the diagonal energy difference, b the coupling matrix element,
and nu a +-1 resolved constructively from the generator's action on the
reference (Jordan-Wigner parity included). The maximum impact
a + sqrt(a^2 + b^2) is sign-free; theta_max is not.

The diagonal difference is evaluated exactly (spectator-orbital Coulomb and
exchange terms included), which is what the simulator cross-checks pin down;
dropping the spectator terms is only valid when nothing but the four active
orbitals is occupied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .integrals import determinant_energy
from .paulis import PauliString
from .pools import Generator, SINGLE_KINDS, fermionic_excitation


@dataclass(frozen=True)
class PreselectResult:
    orbitals: tuple
    a: float
    b: float
    delta_e_max: float
    theta_max: float
    parity_sign: int

    def delta_e(self, theta):
        """dE(theta); dE(theta_max) == delta_e_max."""
        return self.a * (1.0 - math.cos(2.0 * theta)) - self.parity_sign * self.b * math.sin(
            2.0 * theta
        )


def ladder_sign(ops, basis: int):
    """Apply a ladder monomial to |basis>; returns (new_basis, sign) or None.

    Operators act right to left; the sign counts occupied orbitals below
    each index, the usual convention for ascending-ordered determinants.
    """
    sign = 1
    b = basis
    for kind, p in reversed(list(ops)):
        occupied = (b >> p) & 1
        if kind == "-" and not occupied:
            return None
        if kind == "+" and occupied:
            return None
        if (b & ((1 << p) - 1)).bit_count() & 1:
            sign = -sign
        b ^= 1 << p
    return b, sign


def generator_reference_sign(gen: Generator, occ_mask: int) -> int:
    """sigma with exp(-i theta G)|psi0> = cos(theta)|psi0> + sigma sin(theta)|psi1>.

    Exact integer/complex arithmetic on the generator's Pauli words; valid
    whenever the generator's source orbitals are occupied and targets empty.
    """
    action = gen.pauli.apply_to_basis(occ_mask)
    flip = 0
    for k in gen.orbitals:
        flip |= 1 << k
    target = occ_mask ^ flip
    gamma = action.get(target)
    if gamma is None or len(action) != 1 or abs(abs(gamma) - 1.0) > 1e-12:
        raise ValueError(f"{gen} does not act as a two-level excitation on the reference")
    if abs(gamma.real) > 1e-12:
        raise ValueError(f"{gen} has an unexpected phase {gamma} on the reference")
    return 1 if gamma.imag > 0 else -1


def _finish(soh, occ_mask, orbitals, b_unsigned, m_sign, gen):
    flip = 0
    for k in orbitals:
        flip |= 1 << k
    h00 = determinant_energy(soh, occ_mask)
    h11 = determinant_energy(soh, occ_mask ^ flip)
    a = 0.5 * (h00 - h11)
    sigma = generator_reference_sign(gen, occ_mask)
    nu = sigma * m_sign
    radius = math.hypot(a, b_unsigned)
    delta_e_max = a + radius
    if radius < 1e-15:
        theta_max = 0.0
    else:
        phi = math.atan2(nu * b_unsigned, a)
        theta_max = 0.5 * (math.pi + phi)
        # dE has period pi; canonicalize to [-pi/2, pi/2)
        theta_max = (theta_max + math.pi / 2.0) % math.pi - math.pi / 2.0
    return PreselectResult(tuple(orbitals), a, b_unsigned, delta_e_max, theta_max, nu)


def _check_occupancy(occ_mask, occupied, virtual):
    for k in occupied:
        if not (occ_mask >> k) & 1:
            raise ValueError(f"orbital {k} must be occupied in the reference")
    for k in virtual:
        if (occ_mask >> k) & 1:
            raise ValueError(f"orbital {k} must be unoccupied in the reference")


def preselect_double(soh, occ_mask, p, q, r, s) -> PreselectResult:
    """Closed-form impact of the fermionic double (p,q) -> (r,s)."""
    if len({p, q, r, s}) != 4:
        raise ValueError("double excitation needs four distinct orbitals")
    _check_occupancy(occ_mask, (p, q), (r, s))
    gen = fermionic_excitation((p, q), (r, s), soh.n_so)
    return preselect_generator(soh, occ_mask, gen)


def preselect_single(soh, occ_mask, p, q) -> PreselectResult:
    """Closed-form impact of the fermionic single p -> q (non-HF references)."""
    _check_occupancy(occ_mask, (p,), (q,))
    gen = fermionic_excitation((p,), (q,), soh.n_so)
    return preselect_generator(soh, occ_mask, gen)


def preselect_generator(soh, occ_mask, gen: Generator) -> PreselectResult:
    """Dispatch on generator kind; works for fermionic, qubit, and OVP kinds."""
    orbitals = gen.orbitals
    if gen.kind in SINGLE_KINDS:
        p, q = orbitals
        _check_occupancy(occ_mask, (p,), (q,))
        excited = occ_mask ^ (1 << p) ^ (1 << q)
        back, m = ladder_sign((("+", p), ("-", q)), excited)
        assert back == occ_mask
        b = soh.h[p, q].real
        for c in range(soh.n_so):
            if c != p and (occ_mask >> c) & 1:
                b += (soh.g[p, c, c, q] - soh.g[p, c, q, c]).real
    else:
        p, q, r, s = orbitals
        _check_occupancy(occ_mask, (p, q), (r, s))
        excited = occ_mask ^ (1 << p) ^ (1 << q) ^ (1 << r) ^ (1 << s)
        back, m = ladder_sign((("+", p), ("+", q), ("-", r), ("-", s)), excited)
        assert back == occ_mask
        b = (soh.g[p, q, r, s] - soh.g[p, q, s, r]).real
    return _finish(soh, occ_mask, orbitals, b, m, gen)


def first_layer_rotation(gen: Generator, occ_mask: int):
    """Reduce a first-layer double on a basis reference to one Pauli rotation.

    Returns (word, sign) with
    apply_pauli_rotation(ref, word, sign * theta) == apply_generator_exponential(ref, gen, theta),
    the word being X on all four orbitals except Y on the last.
    """
    p, q, r, s = gen.orbitals
    _check_occupancy(occ_mask, (p, q), (r, s))
    sigma = generator_reference_sign(gen, occ_mask)
    word = PauliString.from_ops(
        gen.n_qubits, [("X", p), ("X", q), ("X", r), ("Y", s)]
    )
    return word, sigma

"""Compact VQE ansatz construction on an exact state-vector simulator.

Energy-sorted operator selection over UCCSD / qubit-excitation / OVP-CEO
pools, exact per-parameter trigonometric landscapes for coordinate-descent
optimization, and closed-form classical pre-selection of double excitations
from electron integrals.
"""

from .integrals import (
    expand_spin_orbitals,
    hf_energy,
    hf_state_occupation,
    parse_fcidump,
    serialize_fcidump,
    to_pauli_hamiltonian,
)
from .landscape import (
    AnsatzElement,
    TrigLandscape,
    minimize_landscape,
    reconstruct_landscape,
    sweep_optimize,
)
from .oracle import ground_energy
from .paulis import PauliString, PauliSum, jordan_wigner
from .pools import (
    Generator,
    Pool,
    build_ovp_ceo_pool,
    build_qe_pool,
    build_uccsd_pool,
    extend_with_triples,
    qe_double,
)
from .preselect import (
    PreselectResult,
    first_layer_rotation,
    preselect_double,
    preselect_single,
)
from .selection import (
    BuildResult,
    SelectionRecord,
    build_ansatz_adaptive,
    build_ansatz_energy_sorting,
    build_ansatz_fixed,
    build_ansatz_ovp_paired,
    energy_sort,
    select_ovp_ceo_pair,
)
from .simulator import (
    EvalCounter,
    StateVector,
    apply_generator_exponential,
    apply_pauli_rotation,
    expectation,
    prepare_basis_state,
)

__version__ = "0.1.0"

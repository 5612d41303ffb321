import functools
import json
import os

import pytest

from vqesweep.integrals import (
    expand_spin_orbitals,
    hf_state_occupation,
    parse_fcidump,
    to_pauli_hamiltonian,
)

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def fixture_path(stem, kind="fcidump"):
    return os.path.join(FIXTURES, f"{stem}.{kind}")


@functools.lru_cache(maxsize=None)
def load_problem(stem):
    """(mi, reference_values, soh, occ_mask, qubit hamiltonian) for a fixture."""
    with open(fixture_path(stem)) as fh:
        mi = parse_fcidump(fh.read())
    with open(fixture_path(stem, "reference.json")) as fh:
        ref = json.load(fh)
    soh = expand_spin_orbitals(mi)
    occ = hf_state_occupation(soh.n_so, mi.n_elec, mi.ms2)
    return mi, ref, soh, occ, to_pauli_hamiltonian(soh)


@pytest.fixture
def h2():
    return load_problem("h2_0.735")


@pytest.fixture
def h4():
    return load_problem("h4_0.90")


@pytest.fixture
def lih():
    return load_problem("lih_1.5949")

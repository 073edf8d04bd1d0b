"""Shared fixtures and independent dense oracles for the test suite.

The oracle path builds operators by explicit Kronecker products of 2x2
matrices, never touching the symplectic bookkeeping under test.
"""

from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
LETTER_MATRICES = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def kron_chain(letters):
    """Dense matrix of a Pauli word given as a string like 'XIZ'; qubit 0
    is the leftmost letter (most significant)."""
    out = np.array([[1.0 + 0j]])
    for letter in letters:
        out = np.kron(out, LETTER_MATRICES[letter])
    return out


def string_to_dense(p):
    """Oracle matrix of a PauliString from its displayed phase and letters."""
    word = "".join(p.letter(q) for q in range(p.n_qubits))
    return complex(p.phase) * kron_chain(word)


def sum_to_dense(s):
    out = np.zeros((1 << s.n_qubits, 1 << s.n_qubits), dtype=complex)
    for p, c in s.items():
        out += c * string_to_dense(p)
    return out


def fixture_path(name):
    path = FIXTURES / name
    if not path.exists():
        pytest.skip(f"fixture {name} not present")
    return path


@pytest.fixture(scope="session")
def h2_ints():
    from ttmap.chem import load_fcidump
    return load_fcidump(fixture_path("h2_631g.fcidump"))


@pytest.fixture(scope="session")
def h2_jw_hamiltonian(h2_ints):
    from ttmap.encode import map_hamiltonian
    from ttmap.ttree import build_jw, pair_majoranas
    return map_hamiltonian(h2_ints, pair_majoranas(build_jw(h2_ints.n_spin_orbitals)))


@pytest.fixture(scope="session")
def h2_ground(h2_jw_hamiltonian):
    from ttmap.solver import ground_state
    energies, states = ground_state(h2_jw_hamiltonian, k=1)
    return float(energies[0]), states[:, 0]

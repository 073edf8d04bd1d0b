"""Hamiltonian mapping and Fock-state encoding: spectrum invariance across
mappings, number operators, and occupation semantics."""

import numpy as np
import pytest

from conftest import sum_to_dense
from ttmap.chem import MolecularIntegrals
from ttmap.encode import (EncodeError, encode_occupation,
                          hf_determinant_energy, map_hamiltonian,
                          number_operator, total_number_operator)
from ttmap.solver import bits_of_index, ground_state
from ttmap.tailor import random_tree
from ttmap.ttree import build_jw, build_parity_x, pair_majoranas


def toy_integrals(n_so=4, seed=0):
    """Random symmetric integral tensors with the index symmetries of real
    orbitals, for mapping-invariance checks."""
    rng = np.random.default_rng(seed)
    h1 = rng.standard_normal((n_so, n_so))
    h1 = 0.5 * (h1 + h1.T)
    h2 = rng.standard_normal((n_so,) * 4)
    h2 = 0.5 * (h2 + h2.transpose(1, 0, 3, 2))
    h2 = 0.5 * (h2 + h2.transpose(2, 3, 0, 1))
    return MolecularIntegrals(n_so, 2, 0.37, h1, h2)


def test_jw_occupation_is_literal():
    pairing = pair_majoranas(build_jw(4))
    for occ in ([0, 0, 0, 0], [1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 1]):
        psi = encode_occupation(pairing, occ)
        idx = int(np.argmax(np.abs(psi)))
        assert bits_of_index(idx, 4) == tuple(occ)
        assert abs(psi[idx]) == pytest.approx(1.0)


def test_number_operator_eigenvalues():
    rng = np.random.default_rng(4)
    for _ in range(10):
        n = int(rng.integers(2, 6))
        pairing = pair_majoranas(random_tree(n, rng))
        occ = [int(b) for b in rng.integers(0, 2, n)]
        psi = encode_occupation(pairing, occ)
        for mode in range(n):
            dense = sum_to_dense(number_operator(pairing, mode))
            val = np.vdot(psi, dense @ psi).real
            assert val == pytest.approx(occ[mode], abs=1e-10)
        total = sum_to_dense(total_number_operator(pairing))
        assert np.vdot(psi, total @ psi).real == pytest.approx(sum(occ), abs=1e-10)


def test_encoded_states_orthonormal():
    rng = np.random.default_rng(8)
    pairing = pair_majoranas(random_tree(4, rng))
    basis = []
    for idx in range(16):
        occ = bits_of_index(idx, 4)
        basis.append(encode_occupation(pairing, occ))
    gram = np.array([[np.vdot(a, b) for b in basis] for a in basis])
    assert np.allclose(gram, np.eye(16), atol=1e-10)


def test_map_hamiltonian_spectrum_invariance():
    ints = toy_integrals()
    reference = None
    rng = np.random.default_rng(1)
    trees = [build_jw(4), build_parity_x([0, 1, 2, 3]),
             build_parity_x([2, 0, 3, 1])]
    trees += [random_tree(4, rng) for _ in range(5)]
    for tree in trees:
        h = map_hamiltonian(ints, pair_majoranas(tree))
        vals = np.linalg.eigvalsh(sum_to_dense(h))
        if reference is None:
            reference = vals
        else:
            assert np.allclose(vals, reference, atol=1e-9)


def test_hamiltonian_commutes_with_total_number():
    ints = toy_integrals(seed=2)
    pairing = pair_majoranas(build_jw(4))
    h = sum_to_dense(map_hamiltonian(ints, pairing))
    ntot = sum_to_dense(total_number_operator(pairing))
    assert np.linalg.norm(h @ ntot - ntot @ h) < 1e-9


def test_hf_energy_equals_mapped_expectation(h2_ints):
    pairing = pair_majoranas(build_jw(h2_ints.n_spin_orbitals))
    h = map_hamiltonian(h2_ints, pairing)
    occ = [1] * h2_ints.n_electrons + [0] * (h2_ints.n_spin_orbitals
                                             - h2_ints.n_electrons)
    psi = encode_occupation(pairing, occ)
    from ttmap.solver import expectation
    assert expectation(h, psi) == pytest.approx(
        hf_determinant_energy(h2_ints), abs=1e-10)


def test_ground_energy_mapping_independent(h2_ints):
    rng = np.random.default_rng(0)
    e_ref = None
    for tree in [build_jw(8), random_tree(8, rng)]:
        h = map_hamiltonian(h2_ints, pair_majoranas(tree))
        energies, _ = ground_state(h, k=1)
        if e_ref is None:
            e_ref = energies[0]
        else:
            assert energies[0] == pytest.approx(e_ref, abs=1e-9)


def test_encode_errors():
    pairing = pair_majoranas(build_jw(3))
    with pytest.raises(EncodeError):
        encode_occupation(pairing, [1, 0])          # length mismatch
    with pytest.raises(EncodeError):
        number_operator(pairing, 5)
    bad = toy_integrals(n_so=6)
    with pytest.raises(EncodeError):
        map_hamiltonian(bad, pairing)               # size mismatch
    asym = toy_integrals()
    asym.h1 = asym.h1 + np.triu(np.ones((4, 4)), 1)
    with pytest.raises(EncodeError):
        map_hamiltonian(asym, pair_majoranas(build_jw(4)))

"""Qubit-space realization of ladder operators, Fock states and the
electronic Hamiltonian under a Majorana pairing."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .chem import MolecularIntegrals
from .pauli import PauliError, PauliSum
from .solver import apply_pauli_sum, zero_state
from .ttree import MajoranaPairing


class EncodeError(ValueError):
    pass


@dataclass(frozen=True)
class LadderImages:
    """Annihilation and creation images a_j, a_j^dag per mode, as 2-term sums."""
    n_modes: int
    annihilation: Tuple[PauliSum, ...]
    creation: Tuple[PauliSum, ...]


def ladder_images(pairing: MajoranaPairing) -> LadderImages:
    """a_j = (g_even + i g_odd)/2 and its adjoint for every mode."""
    ann, cre = [], []
    for j in range(pairing.n_modes):
        g_even, g_odd = pairing.pair(j)
        even = PauliSum.from_string(g_even, 0.5)
        odd = PauliSum.from_string(g_odd, 0.5j)
        ann.append(even + odd)
        cre.append(even - odd)
    return LadderImages(pairing.n_modes, tuple(ann), tuple(cre))


def number_operator(pairing: MajoranaPairing, mode: int) -> PauliSum:
    """The mapped a_j^dag a_j = (1 + i g_even g_odd)/2."""
    if not 0 <= mode < pairing.n_modes:
        raise EncodeError(f"mode {mode} out of range")
    g_even, g_odd = pairing.pair(mode)
    n = g_even.n_qubits
    out = PauliSum.identity(n, 0.5)
    out.add_string(g_even * g_odd, 0.5j)
    return out


def total_number_operator(pairing: MajoranaPairing) -> PauliSum:
    out = PauliSum(pairing.n_modes)
    for j in range(pairing.n_modes):
        out = out + number_operator(pairing, j)
    return out


def encode_occupation(pairing: MajoranaPairing, occupations: Sequence[int]) -> np.ndarray:
    """Statevector of the Fock basis state with the given occupations.

    Creation images are applied to the mapped vacuum in descending mode
    order, the highest mode acting first, which fixes the fermionic sign
    convention of the occupation-number notation.
    """
    if len(occupations) != pairing.n_modes:
        raise EncodeError("occupation vector length mismatch")
    images = ladder_images(pairing)
    psi = zero_state(pairing.n_modes)
    for j in range(pairing.n_modes - 1, -1, -1):
        if occupations[j]:
            psi = apply_pauli_sum(images.creation[j], psi)
    norm = np.linalg.norm(psi)
    if norm < 1e-12:
        raise EncodeError("creation string annihilated the vacuum")
    return psi / norm


def map_hamiltonian(ints: MolecularIntegrals, pairing: MajoranaPairing,
                    tol: float = 1e-9) -> PauliSum:
    """Map the second-quantized electronic Hamiltonian to a Pauli sum.

    Computes sum_ij h_ij a_i^dag a_j + sum_ijkl h_ijkl a_i^dag a_j^dag a_l a_k
    + e_core, expanding ladder images with exact phase bookkeeping.
    """
    n = ints.n_spin_orbitals
    if n != pairing.n_modes:
        raise EncodeError(f"integrals have {n} spin-orbitals, "
                          f"pairing has {pairing.n_modes} modes")
    if np.max(np.abs(ints.h1 - ints.h1.T)) > tol:
        raise EncodeError("one-body integrals are not symmetric")
    if np.iscomplexobj(ints.h1) or np.iscomplexobj(ints.h2):
        raise EncodeError("complex integrals are not supported")
    images = ladder_images(pairing)
    cre, ann = images.creation, images.annihilation
    h = PauliSum.identity(n, float(ints.e_core))
    for i, j in zip(*np.nonzero(np.abs(ints.h1) > 0)):
        h = h + float(ints.h1[i, j]) * (cre[i] * ann[j])
    idx = np.argwhere(np.abs(ints.h2) > 0)
    # cache the 4-string left products; they repeat across (k, l)
    left_cache = {}
    for i, j, k, l in idx:
        key = (i, j)
        left = left_cache.get(key)
        if left is None:
            left = cre[i] * cre[j]
            left_cache[key] = left
        h = h + float(ints.h2[i, j, k, l]) * (left * (ann[l] * ann[k]))
    return h


def hf_determinant_energy(ints: MolecularIntegrals) -> float:
    """Energy of the determinant filling the lowest modes, straight from the
    integral tensors (no qubit mapping involved)."""
    occ = range(ints.n_electrons)
    e = float(ints.e_core) + sum(float(ints.h1[i, i]) for i in occ)
    for i in occ:
        for j in occ:
            if i != j:
                e += float(ints.h2[i, j, i, j] - ints.h2[i, j, j, i])
    return e

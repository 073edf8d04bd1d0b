"""Statevector engine: matrix-free Pauli-sum action, sparse ground states,
reduced density matrices, entropies, mutual information and block entropies.

Amplitude convention: qubit 0 is the most significant bit of the basis
index, so ``|1100>`` reads left to right as qubits 0..3.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse.linalg as spla

from .pauli import PauliError, PauliSum

# Entropies are reported in this log base unless a call overrides it.
# The natural log is the default; "2" switches every entropy/MI to bits.
_ENTROPY_BASE = "e"

_EIG_CLIP = 1e-12


class SolverError(RuntimeError):
    """Non-Hermitian input or eigensolver non-convergence."""


def set_entropy_base(base: str) -> None:
    global _ENTROPY_BASE
    if base not in ("e", "2"):
        raise ValueError("entropy base must be 'e' or '2'")
    _ENTROPY_BASE = base


def get_entropy_base() -> str:
    return _ENTROPY_BASE


def _log_divisor(base: Optional[str]) -> float:
    return math.log(2.0) if (base or _ENTROPY_BASE) == "2" else 1.0


# -- basic state helpers ------------------------------------------------

def zero_state(n_qubits: int) -> np.ndarray:
    psi = np.zeros(1 << n_qubits, dtype=complex)
    psi[0] = 1.0
    return psi


def basis_state(n_qubits: int, bits: Sequence[int]) -> np.ndarray:
    if len(bits) != n_qubits:
        raise ValueError("bit count mismatch")
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    psi = np.zeros(1 << n_qubits, dtype=complex)
    psi[index] = 1.0
    return psi


def bits_of_index(index: int, n_qubits: int) -> Tuple[int, ...]:
    return tuple((index >> (n_qubits - 1 - q)) & 1 for q in range(n_qubits))


# -- Pauli action -------------------------------------------------------

_PAR_CACHE: Dict[int, np.ndarray] = {}


def _basis_indices(n_qubits: int) -> np.ndarray:
    arr = _PAR_CACHE.get(n_qubits)
    if arr is None:
        arr = np.arange(1 << n_qubits, dtype=np.uint64)
        _PAR_CACHE[n_qubits] = arr
    return arr


def apply_pauli_string(x: int, z: int, coeff: complex, psi: np.ndarray,
                       out: np.ndarray) -> None:
    """Accumulate coeff * (canonical string for key (x, z)) applied to psi.

    The canonical string is the plain letter product, i.e. i^{|x&z|} X^x Z^z;
    its action is a bit-flip permutation with a diagonal sign pattern.
    """
    n = psi.shape[0].bit_length() - 1
    idx = _basis_indices(n)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(z)) & 1)
    c = coeff * (1j ** ((x & z).bit_count() % 4))
    if x:
        out[idx ^ np.uint64(x)] += c * (signs * psi)
    else:
        out += c * (signs * psi)


def apply_pauli_sum(h: PauliSum, psi: np.ndarray) -> np.ndarray:
    """Exact matrix-free action of a Pauli sum on a statevector."""
    if psi.shape[0] != (1 << h.n_qubits):
        raise PauliError("statevector size does not match operator")
    out = np.zeros_like(psi, dtype=complex)
    for (x, z), c in h.terms.items():
        apply_pauli_string(x, z, c, psi, out)
    return out


class CompiledPauliSum:
    """A Pauli sum frozen into flat arrays for repeated fast application.

    Detects the real-symmetric case (real coefficients, even Y count per
    term) and then works in float64 throughout.
    """

    def __init__(self, h: PauliSum):
        self.n_qubits = h.n_qubits
        self.dim = 1 << h.n_qubits
        keys = list(h.terms)
        self.xs = [k[0] for k in keys]
        self.zs = [k[1] for k in keys]
        coeffs = []
        for (x, z), c in h.terms.items():
            coeffs.append(complex(c) * (1j ** ((x & z).bit_count() % 4)))
        self.real = all(abs(c.imag) < 1e-14 for c in coeffs)
        dtype = np.float64 if self.real else np.complex128
        self.coeffs = np.array([c.real if self.real else c for c in coeffs], dtype=dtype)
        self.dtype = dtype
        idx = _basis_indices(self.n_qubits)
        self._signs = None
        if len(keys) * self.dim <= (1 << 24):
            # precomputed sign patterns; skipped for big systems to bound memory
            self._signs = np.empty((len(keys), self.dim), dtype=np.int8)
            for t, z in enumerate(self.zs):
                self._signs[t] = 1 - 2 * (np.bitwise_count(idx & np.uint64(z)) & 1).astype(np.int8)

    def matvec(self, psi: np.ndarray) -> np.ndarray:
        psi = np.asarray(psi).reshape(-1)
        if self.real and not np.iscomplexobj(psi):
            work = psi.astype(np.float64, copy=False)
        else:
            work = psi.astype(np.complex128, copy=False)
        out = np.zeros_like(work)
        idx = _basis_indices(self.n_qubits)
        for t, (x, z) in enumerate(zip(self.xs, self.zs)):
            if self._signs is not None:
                vals = self.coeffs[t] * (self._signs[t] * work)
            else:
                signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(z)) & 1)
                vals = self.coeffs[t] * (signs * work)
            if x:
                out[idx ^ np.uint64(x)] += vals
            else:
                out += vals
        return out

    def as_linear_operator(self) -> spla.LinearOperator:
        return spla.LinearOperator((self.dim, self.dim), matvec=self.matvec,
                                   dtype=self.dtype)

    def to_dense(self) -> np.ndarray:
        """Dense matrix, built column by column from the same action."""
        mat = np.zeros((self.dim, self.dim), dtype=self.dtype)
        eye = np.eye(self.dim, dtype=self.dtype)
        for j in range(self.dim):
            mat[:, j] = self.matvec(eye[:, j])
        return mat


def ground_state(h: PauliSum, k: int = 1, seed: int = 7,
                 max_krylov: int = 200) -> Tuple[np.ndarray, np.ndarray]:
    """Lowest-k eigenpairs of a Hermitian Pauli sum.

    Small systems are diagonalized densely; larger ones go through
    matrix-free Lanczos (ARPACK) with a seeded start vector.  Each
    returned pair satisfies ||H psi - E psi|| <= 1e-8.
    """
    if not h.is_hermitian:
        raise SolverError("Hamiltonian is not Hermitian")
    comp = CompiledPauliSum(h)
    dim = comp.dim
    if dim <= 512 or k >= dim - 1:
        mat = comp.to_dense()
        vals, vecs = np.linalg.eigh(mat)
        energies, states = vals[:k], vecs[:, :k]
    else:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(dim)
        if not comp.real:
            v0 = v0 + 1j * rng.standard_normal(dim)
        try:
            vals, vecs = spla.eigsh(comp.as_linear_operator(), k=k, which="SA",
                                    v0=v0, ncv=min(max_krylov, dim - 1),
                                    maxiter=2000, tol=0.0)
        except spla.ArpackNoConvergence as exc:
            raise SolverError(f"Lanczos did not converge: {exc}") from exc
        order = np.argsort(vals)
        energies, states = vals[order], vecs[:, order]
    states = states.astype(complex)
    for i in range(k):
        resid = np.linalg.norm(comp.matvec(states[:, i]) - energies[i] * states[:, i])
        if resid > 1e-8:
            raise SolverError(f"eigenpair {i} residual {resid:.2e} above 1e-8")
    return np.asarray(energies, dtype=float), states


def expectation(h: PauliSum, psi: np.ndarray) -> float:
    if not h.is_hermitian:
        raise SolverError("expectation requires a Hermitian operator")
    return float(np.vdot(psi, apply_pauli_sum(h, psi)).real)


# -- density matrices and entropies ------------------------------------

def reduced_density(psi: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on a subset of at most two qubits."""
    if len(qubits) > 2:
        raise ValueError("subset larger than two qubits")
    n = psi.shape[0].bit_length() - 1
    tensor = psi.reshape([2] * n)
    keep = list(qubits)
    rest = [q for q in range(n) if q not in keep]
    a = tensor.transpose(keep + rest).reshape(1 << len(keep), -1)
    return a @ a.conj().T


def entropy_of_density(rho: np.ndarray, base: Optional[str] = None) -> float:
    vals = np.linalg.eigvalsh(rho)
    vals = vals[vals > _EIG_CLIP]
    return float(-(vals * np.log(vals)).sum() / _log_divisor(base))


def _entropy_from_gram(gram: np.ndarray, base: Optional[str] = None) -> float:
    vals = np.linalg.eigvalsh(gram)
    vals = vals[vals > _EIG_CLIP]
    return float(-(vals * np.log(vals)).sum() / _log_divisor(base))


def mutual_information_matrix(psi: np.ndarray, base: Optional[str] = None) -> np.ndarray:
    """Pairwise qubit mutual information I_ij = S_i + S_j - S_ij of a pure state."""
    n = psi.shape[0].bit_length() - 1
    single = [entropy_of_density(reduced_density(psi, [q]), base) for q in range(n)]
    mi = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            s_ij = entropy_of_density(reduced_density(psi, [i, j]), base)
            val = single[i] + single[j] - s_ij
            if val < -1e-12:
                raise SolverError(f"negative mutual information at ({i},{j}): {val}")
            mi[i, j] = mi[j, i] = max(val, 0.0)
    return mi


def block_entropies(psi: np.ndarray, base: Optional[str] = None) -> np.ndarray:
    """Entropy of qubits 0..k-1 for every cut k = 1..n-1."""
    n = psi.shape[0].bit_length() - 1
    out = np.empty(n - 1)
    for k in range(1, n):
        a = psi.reshape(1 << k, -1)
        gram = a @ a.conj().T if k <= n - k else (a.conj().T @ a)
        out[k - 1] = _entropy_from_gram(gram, base)
    return out


def permute_statevector(psi: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Relabel qubits: amplitude of old qubit q moves to qubit perm[q]."""
    n = psi.shape[0].bit_length() - 1
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation")
    tensor = psi.reshape([2] * n)
    # axis a of the output takes the old axis q with perm[q] == a
    inverse = [0] * n
    for q, p in enumerate(perm):
        inverse[p] = q
    return tensor.transpose(inverse).reshape(-1)


# -- CSV export ---------------------------------------------------------

def matrix_to_csv(matrix: np.ndarray, labels: Optional[List[str]] = None) -> str:
    n = matrix.shape[0]
    labels = labels or [f"q{i}" for i in range(n)]
    lines = ["," + ",".join(labels)]
    for i in range(n):
        lines.append(labels[i] + "," + ",".join(f"{v:.12g}" for v in matrix[i]))
    return "\n".join(lines) + "\n"


def block_entropies_to_csv(values: np.ndarray) -> str:
    lines = ["cut,entropy"]
    for k, v in enumerate(values, 1):
        lines.append(f"{k},{v:.12g}")
    return "\n".join(lines) + "\n"

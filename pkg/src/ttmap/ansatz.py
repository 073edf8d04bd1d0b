"""Excitation analysis (paired generalized coupled cluster), RY
hardware-efficient circuits, and the variational eigensolver loop."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from .chem import MolecularIntegrals
from .encode import EncodeError, encode_occupation, ladder_images
from .pauli import PauliSum
from .solver import CompiledPauliSum
from .ttree import MajoranaPairing

TAYLOR_TOL = 1e-12


class AnsatzError(RuntimeError):
    pass


# -- reference state ----------------------------------------------------

def hf_reference(n_spin_orbitals: int, n_electrons: int,
                 pairing: MajoranaPairing) -> np.ndarray:
    """Encoded determinant with the lowest n_electrons modes occupied."""
    if n_electrons > n_spin_orbitals:
        raise EncodeError("more electrons than spin-orbitals")
    occ = [1] * n_electrons + [0] * (n_spin_orbitals - n_electrons)
    return encode_occupation(pairing, occ)


# -- excitation generators ---------------------------------------------

def paired_double_generator(pairing: MajoranaPairing, mo_i: int, mo_j: int) -> PauliSum:
    """Anti-Hermitian generator moving the electron pair of MO i to MO j."""
    images = ladder_images(pairing)
    cre, ann = images.creation, images.annihilation
    t = cre[2 * mo_j] * cre[2 * mo_j + 1] * ann[2 * mo_i + 1] * ann[2 * mo_i]
    return t - t.adjoint()


def spin_summed_single_generator(pairing: MajoranaPairing, mo_i: int, mo_j: int) -> PauliSum:
    """Anti-Hermitian generator of the spin-symmetric single excitation i->j."""
    images = ladder_images(pairing)
    cre, ann = images.creation, images.annihilation
    t = cre[2 * mo_j] * ann[2 * mo_i] + cre[2 * mo_j + 1] * ann[2 * mo_i + 1]
    return t - t.adjoint()


def apply_exponential(generator: CompiledPauliSum, theta: float,
                      psi: np.ndarray, tol: float = TAYLOR_TOL) -> np.ndarray:
    """exp(theta * G)|psi> by truncated Taylor action (G sparse anti-Hermitian)."""
    out = psi.copy()
    term = psi
    for k in range(1, 200):
        term = generator.matvec(term) * (theta / k)
        out = out + term
        if np.linalg.norm(term) < tol:
            return out
    raise AnsatzError("Taylor expansion of excitation exponential did not converge")


# -- UpCCGSD analysis ---------------------------------------------------

@dataclass
class ExcitationReport:
    """Converged absolute excitation angles between molecular orbitals."""
    n_mo: int
    theta_s: np.ndarray     # |single| per unordered MO pair, symmetric
    theta_d: np.ndarray     # |double| per unordered MO pair, symmetric
    energy: float
    converged: bool = True

    def to_csv(self, which: str = "d") -> str:
        m = self.theta_d if which == "d" else self.theta_s
        lines = ["," + ",".join(f"mo{i}" for i in range(self.n_mo))]
        for i in range(self.n_mo):
            lines.append(f"mo{i}," + ",".join(f"{v:.12g}" for v in m[i]))
        return "\n".join(lines) + "\n"


def mo_pairs(n_mo: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(n_mo) for j in range(i + 1, n_mo)]


class UpccgsdState:
    """Fixed-order product of excitation exponentials over the HF reference.

    Doubles come first (lexicographic MO pairs), then the spin-summed
    singles, each applied exactly via Taylor action.
    """

    def __init__(self, ints: MolecularIntegrals, pairing: MajoranaPairing):
        if ints.n_spin_orbitals % 2:
            raise AnsatzError("odd spin-orbital count")
        self.n_mo = ints.n_spin_orbitals // 2
        self.pairs = mo_pairs(self.n_mo)
        self.reference = hf_reference(ints.n_spin_orbitals, ints.n_electrons, pairing)
        self.doubles = [CompiledPauliSum(paired_double_generator(pairing, i, j))
                        for i, j in self.pairs]
        self.singles = [CompiledPauliSum(spin_summed_single_generator(pairing, i, j))
                        for i, j in self.pairs]

    @property
    def n_params(self) -> int:
        return 2 * len(self.pairs)

    def prepare(self, params: Sequence[float]) -> np.ndarray:
        if len(params) != self.n_params:
            raise AnsatzError("parameter count mismatch")
        nd = len(self.pairs)
        psi = self.reference
        for gen, theta in zip(self.doubles, params[:nd]):
            if theta:
                psi = apply_exponential(gen, theta, psi)
        for gen, theta in zip(self.singles, params[nd:]):
            if theta:
                psi = apply_exponential(gen, theta, psi)
        return psi


def upccgsd_optimize(ints: MolecularIntegrals, pairing: MajoranaPairing,
                     seed: int = 0, restarts: int = 3, tol: float = 1e-7,
                     maxiter: int = 5000) -> ExcitationReport:
    """Minimize the energy of the UpCCGSD state and report |theta| per MO pair.

    The analysis is convention-fixed to the mapping handed in (a JW pairing
    in the tailoring pipeline).  Gradient-free optimization with restarts;
    the first restart starts from the HF point, later ones from small
    random angles.
    """
    state = UpccgsdState(ints, pairing)
    ham = CompiledPauliSum(_map_for(ints, pairing))

    def energy(params):
        psi = state.prepare(params)
        return float(np.vdot(psi, ham.matvec(psi)).real)

    best = None
    converged = True
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        x0 = np.zeros(state.n_params) if r == 0 \
            else rng.uniform(-0.1, 0.1, state.n_params)
        res = minimize(energy, x0, method="COBYLA",
                       options={"maxiter": maxiter, "rhobeg": 0.2, "tol": tol})
        if best is None or res.fun < best.fun:
            best = res
    if best is None or not np.isfinite(best.fun):
        raise AnsatzError("excitation optimization failed")
    converged = bool(best.success)
    nd = len(state.pairs)
    theta_s = np.zeros((state.n_mo, state.n_mo))
    theta_d = np.zeros((state.n_mo, state.n_mo))
    for (i, j), td, ts in zip(state.pairs, best.x[:nd], best.x[nd:]):
        theta_d[i, j] = theta_d[j, i] = abs(td)
        theta_s[i, j] = theta_s[j, i] = abs(ts)
    return ExcitationReport(state.n_mo, theta_s, theta_d, float(best.fun), converged)


def _map_for(ints, pairing):
    from .encode import map_hamiltonian
    return map_hamiltonian(ints, pairing)


# -- RY hardware-efficient ansatz ---------------------------------------

ENTANGLER_PATTERNS = ("chain_ascending", "chain_descending", "brick")


@dataclass(frozen=True)
class CircuitTemplate:
    """Alternating RY-rotation and CNOT-entangling layers.

    One rotation layer on every qubit, then ``layers`` repetitions of
    [entangling layer; rotation layer]; parameter count is
    n_qubits * (layers + 1).
    """
    n_qubits: int
    layers: int
    entangler: str = "chain_ascending"

    def __post_init__(self):
        if self.layers < 0:
            raise AnsatzError("negative layer count")
        if self.entangler not in ENTANGLER_PATTERNS:
            raise AnsatzError(f"unknown entangler pattern {self.entangler!r}")

    @property
    def n_params(self) -> int:
        return self.n_qubits * (self.layers + 1)

    @property
    def n_cnots(self) -> int:
        return (self.n_qubits - 1) * self.layers

    def cnot_pairs(self, layer: int) -> List[Tuple[int, int]]:
        n = self.n_qubits
        if self.entangler == "chain_ascending":
            return [(q, q + 1) for q in range(n - 1)]
        if self.entangler == "chain_descending":
            return [(q + 1, q) for q in range(n - 2, -1, -1)]
        even = [(q, q + 1) for q in range(0, n - 1, 2)]
        odd = [(q, q + 1) for q in range(1, n - 1, 2)]
        return even + odd if layer % 2 == 0 else odd + even


def build_ry_hea(n_qubits: int, layers: int,
                 entangler: str = "chain_ascending") -> CircuitTemplate:
    return CircuitTemplate(n_qubits, layers, entangler)


def _apply_ry_layer(psi: np.ndarray, n: int, angles: np.ndarray) -> np.ndarray:
    for q, theta in enumerate(angles):
        c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
        view = psi.reshape(1 << q, 2, -1)
        a = view[:, 0, :].copy()
        b = view[:, 1, :]
        view[:, 0, :] = c * a - s * b
        view[:, 1, :] = s * a + c * b
    return psi


def _apply_cnot(psi: np.ndarray, n: int, control: int, target: int) -> None:
    view = psi.reshape([2] * n)
    picker: List = [slice(None)] * n
    picker[control] = 1
    t_axis = target - (1 if target > control else 0)
    sub = view[tuple(picker)]
    view[tuple(picker)] = np.flip(sub, axis=t_axis)


def simulate(template: CircuitTemplate, params: Sequence[float],
             initial: Optional[np.ndarray] = None) -> np.ndarray:
    """Exact statevector evolution of the RY-HEA circuit from |0..0>."""
    params = np.asarray(params, dtype=float)
    if params.shape != (template.n_params,):
        raise AnsatzError(f"expected {template.n_params} parameters, "
                          f"got {params.shape}")
    n = template.n_qubits
    if initial is None:
        psi = np.zeros(1 << n)
        psi[0] = 1.0
    else:
        psi = np.array(initial, dtype=float if not np.iscomplexobj(initial) else complex)
    psi = _apply_ry_layer(psi, n, params[:n])
    for layer in range(template.layers):
        for c, t in template.cnot_pairs(layer):
            _apply_cnot(psi, n, c, t)
        offset = n * (layer + 1)
        psi = _apply_ry_layer(psi, n, params[offset:offset + n])
    return psi.reshape(-1)


# -- VQE ---------------------------------------------------------------

@dataclass
class VqeResult:
    energy: float
    params: np.ndarray
    traces: List[List[float]] = field(default_factory=list)
    budget_exhausted: List[bool] = field(default_factory=list)

    def trace_csv(self) -> str:
        lines = ["restart,iteration,energy"]
        for r, trace in enumerate(self.traces):
            for it, e in enumerate(trace):
                lines.append(f"{r},{it},{e:.12g}")
        return "\n".join(lines) + "\n"


def vqe(h: PauliSum, template: CircuitTemplate, restarts: int = 10,
        seed: int = 0, maxiter: int = 2000) -> VqeResult:
    """Best-of-N restarts of a derivative-free VQE on the RY-HEA circuit.

    Initial angles are drawn uniformly from (-pi, pi]; each restart's RNG
    stream is derived from (seed, restart) so runs are reproducible.
    """
    if h.n_qubits != template.n_qubits:
        raise AnsatzError("Hamiltonian size does not match circuit")
    comp = CompiledPauliSum(h)

    result = VqeResult(np.inf, np.zeros(template.n_params))
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        x0 = rng.uniform(-np.pi, np.pi, template.n_params)
        trace: List[float] = []

        def energy(params):
            psi = simulate(template, params)
            e = float(psi @ comp.matvec(psi)) if comp.real \
                else float(np.vdot(psi, comp.matvec(psi)).real)
            trace.append(e)
            return e

        res = minimize(energy, x0, method="COBYLA",
                       options={"maxiter": maxiter, "rhobeg": 0.4, "tol": 1e-9})
        result.traces.append(trace)
        result.budget_exhausted.append(len(trace) >= maxiter)
        if res.fun < result.energy:
            result.energy = float(res.fun)
            result.params = np.asarray(res.x)
    return result

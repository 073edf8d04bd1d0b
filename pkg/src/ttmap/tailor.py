"""Entanglement-tailored tree construction: excitation selection, the
mutual-information cost function, and qubit-permutation optimization."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .ansatz import ExcitationReport
from .pauli import PauliString, PauliSum
from .solver import (ground_state, mutual_information_matrix,
                     permute_statevector)
from .ttree import Node, TernaryTree, TreeError, build_parity_x


class TailorError(ValueError):
    pass


# -- excitation selection ------------------------------------------------

@dataclass(frozen=True)
class Selection:
    """One selected excitation between two molecular orbitals."""
    kind: str               # "double" or "single"
    pair: Tuple[int, int]   # MO indices, i < j

    @property
    def spin_orbitals(self) -> Tuple[int, int, int, int]:
        i, j = self.pair
        return (2 * i, 2 * i + 1, 2 * j, 2 * j + 1)


@dataclass(frozen=True)
class SelectionProtocol:
    """How to pick the excitations worth disentangling.

    mode "top": the k largest |theta| values; mode "threshold": everything
    strictly above tau.  Singles compete with doubles only when
    include_singles is set (their paired structure still spans the same
    four spin-orbitals).
    """
    mode: str = "top"
    k: int = 1
    tau: float = 0.1
    include_singles: bool = False


def select_excitations(report: ExcitationReport,
                       protocol: SelectionProtocol) -> List[Selection]:
    """Deterministic selection: sort by amplitude descending, ties broken by
    kind (doubles first) then lexicographic MO pair."""
    candidates = []
    for i in range(report.n_mo):
        for j in range(i + 1, report.n_mo):
            candidates.append((report.theta_d[i, j], 0, (i, j), "double"))
            if protocol.include_singles:
                candidates.append((report.theta_s[i, j], 1, (i, j), "single"))
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    if protocol.mode == "top":
        picked = [c for c in candidates[:protocol.k] if c[0] > 0.0]
    elif protocol.mode == "threshold":
        picked = [c for c in candidates if c[0] > protocol.tau]
    else:
        raise TailorError(f"unknown selection mode {protocol.mode!r}")
    if not picked:
        raise TailorError("no excitation selected; lower the threshold "
                          "(or the report has no nonzero amplitudes)")
    return [Selection(kind, pair) for _, _, pair, kind in picked]


# -- tailored tree construction ------------------------------------------

def _merge_branches(selections: Sequence[Selection]) -> List[List[int]]:
    """One spin-orbital chain per branch; selections sharing a spin-orbital
    are merged into a single longer chain in selection order."""
    branches: List[List[int]] = []
    for sel in selections:
        sos = list(sel.spin_orbitals)
        hit = [b for b in branches if set(b) & set(sos)]
        if not hit:
            branches.append(sos)
        elif len(hit) == 1:
            hit[0].extend(s for s in sos if s not in hit[0])
        else:
            raise TailorError(f"selection {sel.pair} overlaps two existing "
                              "branches; cannot merge consistently")
    seen: set = set()
    for b in branches:
        if seen & set(b):
            raise TailorError("branches share spin-orbitals after merging")
        seen |= set(b)
    return branches


def build_tailored_tree(n_so: int,
                        selections: Sequence[Selection]) -> TernaryTree:
    """Tree with one parity x-chain per selected excitation.

    Each branch carries the four spin-orbitals (2i, 2i+1, 2j, 2j+1) of its
    MO pair in that order (root-adjacent first), so the paired-excitation
    subspace compresses onto two qubits.  All remaining spin-orbitals form
    an ascending z-chain whose head is the root; branch b hangs from the
    x-slot of the b-th z-chain node.  Qubit indices follow a z-chain walk
    that emits each attached branch right after its anchor node.
    """
    if not selections:
        raise TailorError("no selections given")
    branches = _merge_branches(selections)
    used = {s for b in branches for s in b}
    if any(s >= n_so or s < 0 for s in used):
        raise TailorError("selection references spin-orbitals outside range")
    z_chain = [s for s in range(n_so) if s not in used]

    if not z_chain:
        if len(branches) != 1:
            raise TailorError("multiple branches need at least one "
                              "unselected spin-orbital for the z-chain")
        return build_parity_x(branches[0])
    if len(branches) > len(z_chain):
        raise TailorError("more branches than z-chain anchor nodes")

    nodes: List[Node] = []
    prev_z: Optional[int] = None
    qubit = 0
    for depth, mode in enumerate(z_chain):
        anchor = qubit
        nodes.append(Node(qubit, mode,
                          parent=prev_z,
                          branch=None if prev_z is None else "z"))
        qubit += 1
        if depth < len(branches):
            prev_b: Optional[int] = None
            for so in branches[depth]:
                nodes.append(Node(qubit, so,
                                  parent=anchor if prev_b is None else prev_b,
                                  branch="x"))
                prev_b = qubit
                qubit += 1
        prev_z = anchor
    return TernaryTree(nodes)


# -- mutual-information cost ----------------------------------------------

def mi_cost(I: np.ndarray) -> float:
    """Sum over qubit pairs of mutual information weighted by squared
    linear distance: C = sum_{i<j} I_ij (i-j)^2."""
    I = np.asarray(I)
    n = I.shape[0]
    if I.shape != (n, n):
        raise TailorError("MI matrix must be square")
    idx = np.arange(n)
    dist2 = (idx[:, None] - idx[None, :]) ** 2
    return float(np.sum(np.triu(I, 1) * np.triu(dist2, 1)))


def _perm_cost(I: np.ndarray, perm: np.ndarray) -> float:
    d = perm[:, None] - perm[None, :]
    return float(np.sum(np.triu(I * d.astype(float) ** 2, 1)))


@functools.lru_cache(maxsize=4)
def _all_perms(n: int) -> np.ndarray:
    from itertools import permutations
    return np.array(list(permutations(range(n))), dtype=np.int64)


def _exhaustive(I: np.ndarray) -> Tuple[np.ndarray, float]:
    n = I.shape[0]
    iu = np.triu_indices(n, 1)
    weights = I[iu]
    perms = _all_perms(n)
    # all n! costs in one matrix product (lexicographic order breaks ties)
    costs = ((perms[:, iu[0]] - perms[:, iu[1]]) ** 2).astype(float) @ weights
    best = int(np.argmin(costs))
    return perms[best].copy(), float(costs[best])


def _order_crossover(a: np.ndarray, b: np.ndarray, rng) -> np.ndarray:
    n = len(a)
    lo, hi = sorted(rng.integers(0, n, 2))
    child = -np.ones(n, dtype=int)
    child[lo:hi + 1] = a[lo:hi + 1]
    fill = [g for g in b if g not in set(child[lo:hi + 1])]
    slots = [i for i in range(n) if child[i] < 0]
    child[slots] = fill
    return child


@dataclass
class GAParams:
    population: int = 200
    generations: int = 300
    mutation_rate: float = 0.2
    elitism: int = 2
    tournament: int = 3


def _genetic(I: np.ndarray, seed: int, params: GAParams) -> Tuple[np.ndarray, float]:
    n = I.shape[0]
    rng = np.random.default_rng(seed)
    pop = [np.arange(n)] + [rng.permutation(n)
                            for _ in range(params.population - 1)]
    fitness = np.array([_perm_cost(I, p) for p in pop])
    for _ in range(params.generations):
        order = np.argsort(fitness, kind="stable")
        pop = [pop[i] for i in order]
        fitness = fitness[order]
        new_pop = pop[:params.elitism]
        while len(new_pop) < params.population:
            picks = rng.integers(0, params.population, params.tournament)
            pa = pop[int(picks.min())]
            picks = rng.integers(0, params.population, params.tournament)
            pb = pop[int(picks.min())]
            child = _order_crossover(pa, pb, rng)
            if rng.random() < params.mutation_rate:
                i, j = rng.integers(0, n, 2)
                child[i], child[j] = child[j], child[i]
            new_pop.append(child)
        pop = new_pop
        fitness = np.array([_perm_cost(I, p) for p in pop])
    best = int(np.argmin(fitness))
    return _polish(I, pop[best], float(fitness[best]))


def _polish(I: np.ndarray, perm: np.ndarray, cost: float
            ) -> Tuple[np.ndarray, float]:
    """Pairwise-swap hill climbing until no swap improves the cost."""
    n = len(perm)
    improved = True
    while improved:
        improved = False
        for i in range(n):
            for j in range(i + 1, n):
                cand = perm.copy()
                cand[i], cand[j] = cand[j], cand[i]
                c = _perm_cost(I, cand)
                if c < cost - 1e-12:
                    perm, cost = cand, c
                    improved = True
    return perm, cost


def _blocked(I: np.ndarray, block_size: int) -> Tuple[np.ndarray, float]:
    """Exhaustive search over permutations of fixed contiguous qubit blocks
    (within-block order preserved), e.g. keeping alpha/beta pairs adjacent."""
    n = I.shape[0]
    if n % block_size:
        raise TailorError("block_size must divide the qubit count")
    m = n // block_size
    if m > 8:
        raise TailorError("blocked search is exhaustive; need <= 8 blocks")
    offsets = np.arange(block_size)
    best_perm, best_cost = None, np.inf
    for bp in _all_perms(m):
        perm = np.empty(n, dtype=int)
        for rank, b in enumerate(bp):
            perm[b * block_size + offsets] = rank * block_size + offsets
        c = _perm_cost(I, perm)
        if c < best_cost:
            best_perm, best_cost = perm, c
    return best_perm, best_cost


def optimize_permutation(I: np.ndarray, method: str = "auto", seed: int = 0,
                         ga_params: Optional[GAParams] = None,
                         block_size: int = 1) -> Tuple[np.ndarray, float]:
    """Minimize mi_cost over qubit relabelings; perm[q] is the new label of
    qubit q.  Exhaustive (optimal) up to 8 qubits, genetic search above;
    the result is never worse than the identity labeling.

    block_size > 1 restricts the search to permutations of contiguous
    blocks of that size (within-block order kept), the standard choice when
    spin-orbital pairs must stay adjacent.
    """
    I = np.asarray(I, dtype=float)
    n = I.shape[0]
    if block_size > 1:
        return _blocked(I, block_size)
    if method == "auto":
        method = "exhaustive" if n <= 8 else "genetic"
    if method == "exhaustive":
        return _exhaustive(I)
    if method != "genetic":
        raise TailorError(f"unknown method {method!r}")
    perm, cost = _genetic(I, seed, ga_params or GAParams())
    ident_cost = _perm_cost(I, np.arange(n))
    if ident_cost < cost:
        return np.arange(n), ident_cost
    return perm, cost


# -- relabeling -----------------------------------------------------------

def relabel(obj: Union[PauliSum, np.ndarray], perm: Sequence[int]
            ) -> Union[PauliSum, np.ndarray]:
    """Apply the qubit relabeling q -> perm[q] to a PauliSum, a statevector
    (length 2^n), or an MI matrix (n x n); spectra and entanglement
    invariants are unchanged."""
    perm = list(perm)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise TailorError("not a permutation")
    if isinstance(obj, PauliSum):
        if obj.n_qubits != n:
            raise TailorError("permutation size mismatch")
        out = PauliSum(n, prune=obj.prune)
        for p, c in obj.items():
            moved = PauliString.identity(n)
            for q, letter in p.letters():
                moved = moved * PauliString.from_letter(n, perm[q], letter)
            out.add_string(moved, c)
        return out
    arr = np.asarray(obj)
    if arr.ndim == 1:
        if arr.shape[0] != 1 << n:
            raise TailorError("permutation size mismatch")
        return permute_statevector(arr, perm)
    if arr.shape != (n, n):
        raise TailorError("permutation size mismatch")
    out = np.empty_like(arr)
    pi = np.asarray(perm)
    out[np.ix_(pi, pi)] = arr
    return out


# -- tree-space sampling ---------------------------------------------------

@dataclass
class TreeSampleStudy:
    costs: np.ndarray
    reference_cost: float
    percentile: float       # fraction of samples with cost > reference
    trees: List[TernaryTree] = field(default_factory=list)


def random_tree(n: int, rng) -> TernaryTree:
    """Uniformly shaped random tree: each new node picks a random free slot
    among existing nodes; modes are a random permutation."""
    modes = rng.permutation(n)
    nodes = [Node(0, int(modes[0]))]
    free = [(0, b) for b in ("x", "y", "z")]
    for q in range(1, n):
        pick = int(rng.integers(0, len(free)))
        parent, branch = free.pop(pick)
        nodes.append(Node(q, int(modes[q]), parent=parent, branch=branch))
        free.extend((q, b) for b in ("x", "y", "z"))
    return TernaryTree(nodes)


def sample_tree_space(ints, count: int, seed: int,
                      reference_tree: Optional[TernaryTree] = None,
                      keep_trees: bool = False) -> TreeSampleStudy:
    """Ground-state MI cost distribution over random trees for one molecule.

    For every sampled tree the Hamiltonian is mapped, solved exactly, and
    the optimal (exhaustive) reordered cost recorded.  The reference
    mapping's cost is ranked against the distribution.
    """
    from .encode import map_hamiltonian
    from .ttree import build_jw, pair_majoranas

    n = ints.n_spin_orbitals
    if n > 10:
        raise TailorError("tree-space sampling is exact-diagonalization "
                          "bound; use <= 10 spin-orbitals")

    def cost_of(tree: TernaryTree) -> float:
        h = map_hamiltonian(ints, pair_majoranas(tree))
        _, states = ground_state(h, k=1)
        I = mutual_information_matrix(states[:, 0])
        _, c = optimize_permutation(I, method="exhaustive")
        return c

    rng = np.random.default_rng(seed)
    costs = np.empty(count)
    trees = []
    for s in range(count):
        tree = random_tree(n, rng)
        costs[s] = cost_of(tree)
        if keep_trees:
            trees.append(tree)
    ref = cost_of(reference_tree if reference_tree is not None
                  else build_jw(n))
    percentile = float(np.mean(costs > ref + 1e-12))
    return TreeSampleStudy(costs, ref, percentile, trees)


def permutation_to_line(perm: Sequence[int]) -> str:
    return " ".join(str(int(p)) for p in perm)


def permutation_from_line(line: str) -> List[int]:
    perm = [int(tok) for tok in line.split()]
    if sorted(perm) != list(range(len(perm))):
        raise TailorError("not a permutation")
    return perm

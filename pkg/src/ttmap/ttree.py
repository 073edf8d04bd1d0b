"""Ternary trees: construction, validation, leg enumeration and Majorana pairing.

Every node of a tree holds one qubit and one fermionic mode; each of the
2m+1 unfilled child slots (legs) yields a Hermitian Pauli string by
tracing the path up to the root.  The pairing walk assigns two strings to
every fermionic mode and leaves the pure-z root path unpaired.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .pauli import PauliString

BRANCHES = ("x", "y", "z")


class TreeError(ValueError):
    """Structurally invalid ternary tree or tree file."""


@dataclass(frozen=True)
class Node:
    qubit: int
    mode: int
    parent: Optional[int] = None      # parent qubit index, None for the root
    branch: Optional[str] = None      # which slot of the parent this node fills


class TernaryTree:
    """Immutable rooted ternary tree over qubits 0..m-1 and modes 0..m-1."""

    def __init__(self, nodes: Sequence[Node]):
        self._nodes: Dict[int, Node] = {n.qubit: n for n in nodes}
        self._children: Dict[int, Dict[str, int]] = {n.qubit: {} for n in nodes}
        self._root: Optional[int] = None
        self._validate_structure(nodes)

    def _validate_structure(self, nodes: Sequence[Node]) -> None:
        m = len(nodes)
        if m == 0:
            raise TreeError("empty tree")
        if len(self._nodes) != m:
            raise TreeError("duplicate qubit index")
        if sorted(self._nodes) != list(range(m)):
            raise TreeError("qubit indices must be a permutation of 0..m-1")
        if sorted(n.mode for n in nodes) != list(range(m)):
            raise TreeError("mode labels must be a permutation of 0..m-1")
        for n in nodes:
            if n.parent is None:
                if n.branch is not None:
                    raise TreeError(f"root node {n.qubit} carries a branch label")
                if self._root is not None:
                    raise TreeError("more than one root")
                self._root = n.qubit
                continue
            if n.branch not in BRANCHES:
                raise TreeError(f"bad branch label {n.branch!r} on node {n.qubit}")
            if n.parent not in self._nodes:
                raise TreeError(f"node {n.qubit} has unknown parent {n.parent}")
            slots = self._children[n.parent]
            if n.branch in slots:
                raise TreeError(f"slot {n.branch} of node {n.parent} filled twice")
            slots[n.branch] = n.qubit
        if self._root is None:
            raise TreeError("no root node")
        # reachability doubles as the cycle check
        seen = set()
        stack = [self._root]
        while stack:
            q = stack.pop()
            seen.add(q)
            stack.extend(self._children[q].values())
        if len(seen) != m:
            raise TreeError("orphaned nodes not reachable from the root")

    # -- accessors ------------------------------------------------------

    @property
    def n_modes(self) -> int:
        return len(self._nodes)

    @property
    def root(self) -> int:
        return self._root

    def node(self, qubit: int) -> Node:
        return self._nodes[qubit]

    def nodes(self) -> List[Node]:
        return [self._nodes[q] for q in sorted(self._nodes)]

    def child(self, qubit: int, branch: str) -> Optional[int]:
        return self._children[qubit].get(branch)

    def mode_of(self, qubit: int) -> int:
        return self._nodes[qubit].mode

    def qubit_of_mode(self, mode: int) -> int:
        for n in self._nodes.values():
            if n.mode == mode:
                return n.qubit
        raise TreeError(f"no node holds mode {mode}")

    def __eq__(self, other) -> bool:
        return isinstance(other, TernaryTree) and self._nodes == other._nodes

    def __repr__(self) -> str:
        return f"TernaryTree(m={self.n_modes}, root={self.root})"

    # -- leg retrieval --------------------------------------------------

    def leg_string(self, qubit: int, branch: str) -> PauliString:
        """Pauli string of the leg at the given empty slot: the slot letter at
        this node, then at each ancestor the letter naming the descent branch."""
        if branch in self._children[qubit]:
            raise TreeError(f"slot {branch} of node {qubit} is not a leg")
        m = self.n_modes
        p = PauliString.from_letter(m, qubit, branch.upper())
        node = self._nodes[qubit]
        while node.parent is not None:
            p = p * PauliString.from_letter(m, node.parent, node.branch.upper())
            node = self._nodes[node.parent]
        return p

    def legs(self) -> List[Tuple[Tuple[int, str], PauliString]]:
        """All 2m+1 legs as ((qubit, branch), string), in node-then-slot order."""
        out = []
        for q in sorted(self._nodes):
            for b in BRANCHES:
                if b not in self._children[q]:
                    out.append(((q, b), self.leg_string(q, b)))
        return out


@dataclass(frozen=True)
class MajoranaPairing:
    """Majorana strings of a tree, two per fermionic mode plus one unpaired.

    ``gammas[2j]`` is the self-adjoint partner of mode ``j`` and
    ``gammas[2j+1]`` the one entering with a factor of i, ordered so the
    mode's number operator annihilates the all-zeros state.
    """

    n_modes: int
    gammas: Tuple[PauliString, ...]
    unpaired: PauliString

    def pair(self, mode: int) -> Tuple[PauliString, PauliString]:
        return self.gammas[2 * mode], self.gammas[2 * mode + 1]


def _z_terminal(tree: TernaryTree, qubit: int) -> int:
    """Follow z-children down from the given node until the z slot is empty."""
    while tree.child(qubit, "z") is not None:
        qubit = tree.child(qubit, "z")
    return qubit


def _node_pair(tree: TernaryTree, qubit: int) -> Tuple[PauliString, PauliString]:
    """The (S^x, S^y) strings of one node: the slot's own leg if empty, else
    the z-downward-most leg under that child."""
    out = []
    for branch in ("x", "y"):
        child = tree.child(qubit, branch)
        if child is None:
            out.append(tree.leg_string(qubit, branch))
        else:
            out.append(tree.leg_string(_z_terminal(tree, child), "z"))
    return out[0], out[1]


def _vacuum_number_sign(g_even: PauliString, g_odd: PauliString) -> int:
    """Eigenvalue of i*g_even*g_odd on |0..0>; the product must be a Z string."""
    p = g_even * g_odd
    if p.x:
        raise TreeError("pair product acts off-diagonally on the vacuum")
    phase = 1j * p.phase
    if phase not in (1, -1):
        raise TreeError("pair product is not Hermitian")
    return int(phase.real)


def pair_majoranas(tree: TernaryTree) -> MajoranaPairing:
    """Assign two Majorana strings to each fermionic mode.

    For every node the x/y walk of the pairing scheme yields (S^x, S^y),
    attributed to the mode the node holds.  Within each pair the order is
    normalized so that (1 + i*g_even*g_odd)/2 annihilates |0..0>, keeping
    the mapped vacuum at the all-zeros state.
    """
    m = tree.n_modes
    gammas: List[Optional[PauliString]] = [None] * (2 * m)
    for q in range(m):
        sx, sy = _node_pair(tree, q)
        mode = tree.mode_of(q)
        if _vacuum_number_sign(sx, sy) == 1:
            sx, sy = sy, sx
        gammas[2 * mode], gammas[2 * mode + 1] = sx, sy
    unpaired = tree.leg_string(_z_terminal(tree, tree.root), "z")
    return MajoranaPairing(m, tuple(gammas), unpaired)


def pairing_table(tree: TernaryTree) -> List[Tuple[str, PauliString]]:
    """Majorana strings in node order: (S_2i, S_2i+1) for the node at qubit i,
    then the unpaired root z-path string last."""
    rows = []
    for q in range(tree.n_modes):
        sx, sy = _node_pair(tree, q)
        rows.append((f"S_{2 * q}", sx))
        rows.append((f"S_{2 * q + 1}", sy))
    rows.append((f"S_{2 * tree.n_modes}", tree.leg_string(_z_terminal(tree, tree.root), "z")))
    return rows


# -- constructors -------------------------------------------------------

def build_jw(n: int) -> TernaryTree:
    """Jordan-Wigner tree: a z-chain with mode k at depth k on qubit k."""
    if n < 1:
        raise TreeError("need at least one mode")
    nodes = [Node(0, 0)]
    nodes += [Node(k, k, parent=k - 1, branch="z") for k in range(1, n)]
    return TernaryTree(nodes)


def build_parity_x(mode_order: Sequence[int]) -> TernaryTree:
    """Parity tree: an x-chain whose k-th node holds ``mode_order[k]``."""
    n = len(mode_order)
    if sorted(mode_order) != list(range(n)):
        raise TreeError("mode_order must be a permutation of 0..n-1")
    nodes = [Node(0, mode_order[0])]
    nodes += [Node(k, mode_order[k], parent=k - 1, branch="x") for k in range(1, n)]
    return TernaryTree(nodes)


def validate(nodes: Sequence[Node]) -> List[str]:
    """Collect structural violations instead of raising; empty means valid."""
    try:
        TernaryTree(nodes)
        return []
    except TreeError as exc:
        return [str(exc)]


# -- file format --------------------------------------------------------

def format_tree(tree: TernaryTree) -> str:
    lines = []
    for n in tree.nodes():
        parent = "-" if n.parent is None else str(n.parent)
        branch = "-" if n.branch is None else n.branch
        lines.append(f"node {n.qubit} mode {n.mode} parent {parent} branch {branch}")
    return "\n".join(lines) + "\n"


def parse_tree(text: str) -> TernaryTree:
    nodes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 8 or parts[0] != "node" or parts[2] != "mode" \
                or parts[4] != "parent" or parts[6] != "branch":
            raise TreeError(f"line {lineno}: expected "
                            f"'node <q> mode <m> parent <q|-> branch <x|y|z|->'")
        try:
            qubit, mode = int(parts[1]), int(parts[3])
        except ValueError:
            raise TreeError(f"line {lineno}: non-integer qubit or mode")
        parent = None if parts[5] == "-" else int(parts[5])
        branch = None if parts[7] == "-" else parts[7]
        if branch is not None and branch not in BRANCHES:
            raise TreeError(f"line {lineno}: bad branch label {branch!r}")
        nodes.append(Node(qubit, mode, parent, branch))
    return TernaryTree(nodes)


def save_tree(tree: TernaryTree, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_tree(tree))


def load_tree(path) -> TernaryTree:
    with open(path) as fh:
        return parse_tree(fh.read())

"""Command-line pipeline: tree construction, Hamiltonian transformation,
exact analysis, and VQE depth scans.

Exit codes: 0 success; 2 invalid options/configuration; 3 input parse
errors; 4 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .ansatz import (AnsatzError, build_ry_hea, upccgsd_optimize, vqe)
from .chem import FcidumpError, HARTREE_TO_KCALMOL, load_fcidump
from .encode import EncodeError, hf_determinant_energy, map_hamiltonian
from .pauli import PauliError, load_sum, save_sum
from .solver import (SolverError, block_entropies, block_entropies_to_csv,
                     ground_state, matrix_to_csv, mutual_information_matrix,
                     set_entropy_base)
from .tailor import (SelectionProtocol, TailorError, build_tailored_tree,
                     mi_cost, optimize_permutation, permutation_to_line,
                     relabel, select_excitations)
from .ttree import (TreeError, build_jw, build_parity_x, load_tree,
                    pair_majoranas, pairing_table, save_tree)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_NUMERIC = 4

DEFAULT_SEED = 7


class CliError(Exception):
    def __init__(self, message, code=EXIT_CONFIG):
        super().__init__(message)
        self.code = code


def _print_majorana_table(tree):
    for label, string in pairing_table(tree):
        from .pauli import format_string
        print(f"{label:>6}  {format_string(string) or 'I'}")


def _parse_select(spec: str) -> SelectionProtocol:
    try:
        mode, value = spec.split(":", 1)
        if mode == "top":
            return SelectionProtocol("top", k=int(value))
        if mode == "thresh":
            return SelectionProtocol("threshold", tau=float(value))
    except ValueError:
        pass
    raise CliError(f"bad --select value {spec!r}; use top:K or thresh:TAU")


def _load_tree_or_fail(path):
    try:
        return load_tree(path)
    except OSError as exc:
        raise CliError(str(exc), EXIT_PARSE)


# -- subcommands ---------------------------------------------------------

def cmd_tree(args) -> int:
    if args.kind == "jw":
        tree = build_jw(args.n)
    elif args.kind == "parity":
        if args.order:
            order = [int(t) for t in args.order.split(",")]
        else:
            order = list(range(args.n))
        tree = build_parity_x(order)
    else:       # tailored
        ints = load_fcidump(args.fcidump)
        jw = pair_majoranas(build_jw(ints.n_spin_orbitals))
        report = upccgsd_optimize(ints, jw, seed=args.seed)
        protocol = _parse_select(args.select)
        if args.singles:
            protocol = SelectionProtocol(protocol.mode, protocol.k,
                                         protocol.tau, include_singles=True)
        selections = select_excitations(report, protocol)
        print("selected excitations:",
              ", ".join(f"{s.kind}({s.pair[0]},{s.pair[1]})"
                        for s in selections))
        tree = build_tailored_tree(ints.n_spin_orbitals, selections)
    _print_majorana_table(tree)
    if args.output:
        save_tree(tree, args.output)
        print(f"wrote {args.output}")
    return EXIT_OK


def cmd_transform(args) -> int:
    ints = load_fcidump(args.fcidump)
    tree = _load_tree_or_fail(args.tree)
    h = map_hamiltonian(ints, pair_majoranas(tree))
    print(f"terms: {len(h)}")
    print(f"max Pauli weight: {h.max_weight()}")
    if args.output:
        save_sum(h, args.output)
        print(f"wrote {args.output}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    set_entropy_base(args.base)
    h = load_sum(args.hamiltonian)
    energies, states = ground_state(h, k=1, seed=args.seed)
    e0 = float(energies[0])
    psi = states[:, 0]
    print(f"ground energy: {e0:.10f} Ha ({e0 * HARTREE_TO_KCALMOL:.4f} kcal/mol)")
    if args.fcidump:
        ints = load_fcidump(args.fcidump)
        e_hf = hf_determinant_energy(ints)
        e_corr = (e_hf - e0) * HARTREE_TO_KCALMOL
        print(f"HF determinant energy: {e_hf:.10f} Ha")
        print(f"correlation energy: {(e_hf - e0):.10f} Ha "
              f"({e_corr:.4f} kcal/mol)")

    I = mutual_information_matrix(psi)
    blocks = block_entropies(psi)
    cost = mi_cost(I)
    print(f"MI cost: {cost:.6f} (log base {args.base})")

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "mi_matrix.csv").write_text(
        matrix_to_csv(I, [f"q{i}" for i in range(h.n_qubits)]))
    (outdir / "block_entropies.csv").write_text(block_entropies_to_csv(blocks))
    from .report import render_block_entropies, render_mi_heatmap
    render_mi_heatmap(I, outdir / "mi_matrix.png")
    render_block_entropies(blocks, outdir / "block_entropies.png")

    if args.reorder:
        perm, reordered_cost = optimize_permutation(
            I, method=args.perm_method, seed=args.seed,
            block_size=args.block_size)
        print(f"optimized permutation: {permutation_to_line(perm)}")
        print(f"reordered MI cost: {reordered_cost:.6f}")
        (outdir / "permutation.txt").write_text(permutation_to_line(perm) + "\n")
        I_re = relabel(I, perm)
        (outdir / "mi_matrix_reordered.csv").write_text(
            matrix_to_csv(I_re, [f"q{i}" for i in range(h.n_qubits)]))
        render_mi_heatmap(I_re, outdir / "mi_matrix_reordered.png",
                          title="Mutual information (reordered)")
    print(f"artifacts in {outdir}/")
    return EXIT_OK


def _parse_layers(spec: str):
    if ":" in spec:
        lo, hi = spec.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in spec.split(",")]


def cmd_vqe(args) -> int:
    ints = load_fcidump(args.fcidump)
    tree = _load_tree_or_fail(args.tree)
    h = map_hamiltonian(ints, pair_majoranas(tree))
    energies, _ = ground_state(h, k=1, seed=args.seed)
    e_fci = float(energies[0])
    print(f"E_FCI: {e_fci:.10f} Ha")

    layer_counts = _parse_layers(args.layers)
    rows = ["layers,e_vqe_hartree,error_kcalmol"]
    errors = []
    for layers in layer_counts:
        template = build_ry_hea(h.n_qubits, layers, args.entangler)
        result = vqe(h, template, restarts=args.restarts, seed=args.seed,
                     maxiter=args.maxiter)
        err = (result.energy - e_fci) * HARTREE_TO_KCALMOL
        errors.append(err)
        rows.append(f"{layers},{result.energy:.12g},{err:.6g}")
        print(f"layers={layers}: E_VQE={result.energy:.10f} Ha  "
              f"error={err:.4f} kcal/mol")
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "vqe_curve.csv").write_text("\n".join(rows) + "\n")
    from .report import render_vqe_curve
    render_vqe_curve(layer_counts, errors, outdir / "vqe_curve.png")
    print(f"artifacts in {outdir}/")
    return EXIT_OK


# -- entry point ---------------------------------------------------------

def _apply_config(args, parser):
    """key = value lines; flags given on the command line win."""
    if not args.config:
        return args
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise CliError(str(exc), EXIT_PARSE)
    overrides = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{args.config}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        overrides[key.replace("-", "_")] = value
    for key, value in overrides.items():
        if not hasattr(args, key):
            raise CliError(f"unknown config key {key!r}")
        current = getattr(args, key)
        if f"--{key.replace('_', '-')}" in sys.argv or key in _positional_names():
            continue        # explicit flag wins
        if isinstance(current, bool):
            value = value.lower() in ("1", "true", "yes")
        elif isinstance(current, int):
            value = int(value)
        elif isinstance(current, float):
            value = float(value)
        setattr(args, key, value)
    return args


def _positional_names():
    return {"command", "kind"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttmap",
        description="Ternary-tree fermion-to-qubit mappings tailored to "
                    "reduce entanglement.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="key = value defaults file")
    parser.add_argument("--threads", type=int, default=0,
                        help="cap BLAS/OpenMP threads (0 = leave as is)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_tree = sub.add_parser("tree", help="construct and print a mapping tree")
    p_tree.add_argument("kind", choices=["jw", "parity", "tailored"])
    p_tree.add_argument("-n", type=int, default=0, help="mode count")
    p_tree.add_argument("--order", help="parity mode order, comma separated")
    p_tree.add_argument("--fcidump", help="integrals for tailored analysis")
    p_tree.add_argument("--select", default="top:1",
                        help="selection protocol: top:K or thresh:TAU")
    p_tree.add_argument("--singles", action="store_true",
                        help="let single excitations compete in selection")
    p_tree.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_tree.add_argument("-o", "--output", help="tree file to write")
    p_tree.set_defaults(func=cmd_tree)

    p_tr = sub.add_parser("transform", help="map integrals to a Pauli sum")
    p_tr.add_argument("--fcidump", required=True)
    p_tr.add_argument("--tree", required=True)
    p_tr.add_argument("-o", "--output", help="hamiltonian file to write")
    p_tr.set_defaults(func=cmd_transform)

    p_an = sub.add_parser("analyze", aliases=["solve"],
                          help="exact ground state, MI matrix, cost")
    p_an.add_argument("--hamiltonian", required=True)
    p_an.add_argument("--fcidump", help="for the correlation energy")
    p_an.add_argument("--reorder", action="store_true",
                      help="optimize the qubit permutation")
    p_an.add_argument("--perm-method", default="auto",
                      choices=["auto", "exhaustive", "genetic"])
    p_an.add_argument("--block-size", type=int, default=1,
                      help="permute contiguous qubit blocks of this size "
                           "(e.g. 2 keeps spin-orbital pairs adjacent)")
    p_an.add_argument("--base", default="e", choices=["e", "2"],
                      help="entropy log base")
    p_an.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_an.add_argument("--outdir", default="analysis")
    p_an.set_defaults(func=cmd_analyze)

    p_vq = sub.add_parser("vqe", help="VQE error vs entangling-layer count")
    p_vq.add_argument("--fcidump", required=True)
    p_vq.add_argument("--tree", required=True)
    p_vq.add_argument("--layers", default="1:6",
                      help="LO:HI range or comma list")
    p_vq.add_argument("--restarts", type=int, default=10)
    p_vq.add_argument("--maxiter", type=int, default=2000)
    p_vq.add_argument("--entangler", default="chain_ascending",
                      choices=["chain_ascending", "chain_descending", "brick"])
    p_vq.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_vq.add_argument("--outdir", default="vqe")
    p_vq.set_defaults(func=cmd_vqe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(args, parser)
        if args.threads > 0:
            for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                        "MKL_NUM_THREADS"):
                os.environ[var] = str(args.threads)
        if args.command == "tree":
            if args.kind == "tailored" and not args.fcidump:
                raise CliError("tree tailored requires --fcidump")
            if args.kind in ("jw", "parity") and args.n < 1 and not args.order:
                raise CliError(f"tree {args.kind} requires -n or --order")
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (FcidumpError, PauliError, TreeError, FileNotFoundError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (TailorError, EncodeError, ValueError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, AnsatzError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

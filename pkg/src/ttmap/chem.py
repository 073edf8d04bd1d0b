"""FCIDUMP parsing and spatial-to-spin-orbital expansion.

The spin-orbital convention is interleaved: qubit 2k holds the alpha spin
of spatial orbital k and qubit 2k+1 the beta spin.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

HARTREE_TO_KCALMOL = 627.509474


class FcidumpError(ValueError):
    """Malformed FCIDUMP content."""


@dataclass
class SpatialIntegrals:
    """Raw spatial-orbital integrals in chemist (ij|kl) ordering."""
    n_orbitals: int
    n_electrons: int
    ms2: int
    e_core: float
    h1: np.ndarray          # (n, n)
    eri: np.ndarray         # (n, n, n, n), chemist convention


@dataclass
class MolecularIntegrals:
    """Spin-orbital tensors feeding the second-quantized Hamiltonian.

    ``h2[i, j, k, l]`` multiplies a_i^dag a_j^dag a_l a_k and already
    carries the 1/2 prefactor of the two-body sum.
    """
    n_spin_orbitals: int
    n_electrons: int
    e_core: float
    h1: np.ndarray          # (n, n)
    h2: np.ndarray          # (n, n, n, n)


def hartree_to_kcalmol(x: float) -> float:
    return x * HARTREE_TO_KCALMOL


def kcalmol_to_hartree(x: float) -> float:
    return x / HARTREE_TO_KCALMOL


_HEADER_KV = re.compile(r"([A-Za-z0-9_]+)\s*=\s*([^,\s]+)")


def parse_fcidump(text: str) -> SpatialIntegrals:
    """Parse Molpro-convention FCIDUMP text into spatial tensors.

    The header runs from ``&FCI`` to ``&END`` (or ``/``); data lines are
    ``value i j k l`` with 1-based indices, ``i=j=k=l=0`` holding the core
    energy and ``k=l=0`` one-body elements.  Eight-fold permutational
    symmetry of the two-electron integrals is expanded on read.
    """
    upper = text.upper()
    start = upper.find("&FCI")
    if start < 0:
        raise FcidumpError("missing &FCI header")
    end_match = re.search(r"&END|^\s*/\s*$", upper[start:], re.MULTILINE)
    if end_match is None:
        raise FcidumpError("unterminated header (no &END or /)")
    header = upper[start + 4:start + end_match.start()]
    fields: Dict[str, str] = {}
    for key, value in _HEADER_KV.findall(header):
        fields[key.upper()] = value
    try:
        norb = int(fields["NORB"])
        nelec = int(fields["NELEC"])
    except KeyError as exc:
        raise FcidumpError(f"header lacks {exc.args[0]}")
    ms2 = int(fields.get("MS2", 0))
    if norb < 1:
        raise FcidumpError("NORB must be positive")

    h1 = np.zeros((norb, norb))
    eri = np.zeros((norb, norb, norb, norb))
    seen: Dict[Tuple[int, int, int, int], float] = {}
    e_core = 0.0
    body = text[start + end_match.end():]
    for lineno, raw in enumerate(body.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise FcidumpError(f"data line {lineno}: expected 'value i j k l'")
        try:
            value = float(parts[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError:
            raise FcidumpError(f"data line {lineno}: unparsable entry {line!r}")
        for idx in (i, j, k, l):
            if idx < 0 or idx > norb:
                raise FcidumpError(f"data line {lineno}: index {idx} out of range")
        canon = _canonical_key(i, j, k, l)
        if canon in seen and abs(seen[canon] - value) > 1e-10:
            raise FcidumpError(f"data line {lineno}: conflicting duplicate for {canon}")
        seen[canon] = value
        if i == j == k == l == 0:
            e_core = value
        elif k == l == 0:
            if i == 0 or j == 0:
                raise FcidumpError(f"data line {lineno}: bad one-body indices")
            h1[i - 1, j - 1] = h1[j - 1, i - 1] = value
        elif l == 0 or k == 0 or i == 0 or j == 0:
            raise FcidumpError(f"data line {lineno}: mixed zero indices")
        else:
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for p, q, r, s in _eightfold(a, b, c, d):
                eri[p, q, r, s] = value
    return SpatialIntegrals(norb, nelec, ms2, e_core, h1, eri)


def _canonical_key(i, j, k, l):
    if k == l == 0:
        return (max(i, j), min(i, j), 0, 0)
    ij = (max(i, j), min(i, j))
    kl = (max(k, l), min(k, l))
    return max(ij, kl) + min(ij, kl)


def _eightfold(i, j, k, l):
    return {(i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
            (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i)}


def format_fcidump(spatial: SpatialIntegrals, tol: float = 1e-14) -> str:
    """Write spatial integrals back out with 8-fold-unique two-body entries."""
    n = spatial.n_orbitals
    lines = [f" &FCI NORB={n},NELEC={spatial.n_electrons},MS2={spatial.ms2},",
             "  ORBSYM=" + "1," * n,
             "  ISYM=1,",
             " &END"]
    def fmt(value, i, j, k, l):
        return f" {value: .16E} {i:4d} {j:4d} {k:4d} {l:4d}"
    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    v = spatial.eri[i, j, k, l]
                    if abs(v) > tol:
                        lines.append(fmt(v, i + 1, j + 1, k + 1, l + 1))
    for i in range(n):
        for j in range(i + 1):
            if abs(spatial.h1[i, j]) > tol:
                lines.append(fmt(spatial.h1[i, j], i + 1, j + 1, 0, 0))
    lines.append(fmt(spatial.e_core, 0, 0, 0, 0))
    return "\n".join(lines) + "\n"


def to_spin_orbitals(spatial: SpatialIntegrals) -> MolecularIntegrals:
    """Expand spatial tensors to interleaved spin-orbitals.

    Reindexes the chemist (ij|kl) tensor into the physicist layout paired
    with a_i^dag a_j^dag a_l a_k and absorbs the 1/2 factor, so that the
    mapped Hamiltonian reproduces HF and FCI energies directly.
    """
    n = spatial.n_orbitals
    nso = 2 * n
    h1 = np.zeros((nso, nso))
    h1[0::2, 0::2] = spatial.h1
    h1[1::2, 1::2] = spatial.h1
    h2 = np.zeros((nso, nso, nso, nso))
    # h2[p,q,r,s] = (1/2) (pr|qs) with spin conservation on (p,r) and (q,s)
    half = 0.5 * spatial.eri
    for sp in (0, 1):
        for sq in (0, 1):
            h2[sp::2, sq::2, sp::2, sq::2] = half.transpose(0, 2, 1, 3)
    return MolecularIntegrals(nso, spatial.n_electrons, spatial.e_core, h1, h2)


def load_fcidump(path) -> MolecularIntegrals:
    with open(path) as fh:
        return to_spin_orbitals(parse_fcidump(fh.read()))

"""Restricted Hartree-Fock with DIIS, plus active-space reduction to
spatial-orbital integrals ready for FCIDUMP export."""

import numpy as np

from .basis import ANGSTROM_TO_BOHR, NUCLEAR_CHARGE, build_basis
from .integrals import eri_tensor, nuclear_repulsion, one_electron_matrices


class SCFError(RuntimeError):
    pass


def rhf(atoms_angstrom, basis_name, max_cycles=200, conv=1e-11, guess="best"):
    """atoms_angstrom: list of (symbol, (x, y, z)) in Angstrom.

    guess = "best" runs the SCF from both a core-Hamiltonian and a GWH
    initial guess and keeps the lower-energy solution (the core guess can
    land on an excited stationary point, e.g. for N2); "core"/"gwh" force
    one starting point (useful to stay on a symmetry-adapted solution when
    a broken-symmetry one lies lower, e.g. square H4).  Returns a dict
    with converged quantities (energies in Hartree).
    """
    atoms = [(sym, np.asarray(xyz) * ANGSTROM_TO_BOHR)
             for sym, xyz in atoms_angstrom]
    charges = [(NUCLEAR_CHARGE[sym], xyz) for sym, xyz in atoms]
    n_electrons = sum(z for z, _ in charges)
    if n_electrons % 2:
        raise SCFError("only closed-shell systems supported")
    n_occ = n_electrons // 2

    funcs = build_basis(atoms, basis_name)
    S, T, V = one_electron_matrices(funcs, charges)
    eri = eri_tensor(funcs)
    hcore = T + V
    e_nuc = nuclear_repulsion(charges)

    # symmetric orthogonalization
    sval, svec = np.linalg.eigh(S)
    if sval.min() < 1e-8:
        raise SCFError("near-singular overlap matrix")
    X = svec @ np.diag(sval ** -0.5) @ svec.T

    def fock(D):
        J = np.einsum("pqrs,rs->pq", eri, D, optimize=True)
        K = np.einsum("prqs,rs->pq", eri, D, optimize=True)
        return hcore + J - 0.5 * K

    diag = np.diag(hcore)
    gwh = 0.875 * S * (diag[:, None] + diag[None, :])
    starts = {"best": (hcore, gwh), "core": (hcore,), "gwh": (gwh,)}[guess]
    best = None
    failures = []
    for start in starts:
        try:
            result = _scf_loop(start, fock, hcore, S, X, n_occ, e_nuc,
                               max_cycles, conv)
        except SCFError as exc:
            failures.append(exc)
            continue
        if best is None or result[0] < best[0] - 1e-10:
            best = result
    if best is None:
        raise failures[0]
    energy, eps, C, cycle = best
    return {
        "energy": energy,
        "e_nuc": e_nuc,
        "orbital_energies": eps,
        "C": C,
        "hcore": hcore,
        "eri": eri,
        "S": S,
        "n_occ": n_occ,
        "n_electrons": n_electrons,
        "funcs": funcs,
        "cycles": cycle + 1,
    }


def _scf_loop(guess_fock, fock, hcore, S, X, n_occ, e_nuc, max_cycles, conv,
              n_damped=5, damping=0.5):
    """One SCF run: damped startup cycles, then DIIS until convergence."""
    eps, C = _solve(guess_fock, X)
    D = 2.0 * C[:, :n_occ] @ C[:, :n_occ].T
    energy = None
    diis_f, diis_e = [], []
    for cycle in range(max_cycles):
        F = fock(D)
        err = X.T @ (F @ D @ S - S @ D @ F) @ X
        if cycle >= n_damped:
            diis_f.append(F)
            diis_e.append(err)
            if len(diis_f) > 8:
                diis_f.pop(0)
                diis_e.pop(0)
            if len(diis_f) > 1:
                F = _diis_extrapolate(diis_f, diis_e)
        eps, C = _solve(F, X)
        D_new = 2.0 * C[:, :n_occ] @ C[:, :n_occ].T
        if cycle < n_damped:
            D_new = damping * D + (1.0 - damping) * D_new
        e_elec = 0.5 * np.einsum("pq,pq->", D_new, hcore + fock(D_new))
        e_tot = e_elec + e_nuc
        delta = abs(e_tot - energy) if energy is not None else np.inf
        dd = np.max(np.abs(D_new - D))
        energy, D = e_tot, D_new
        if delta < conv and dd < 1e-7:
            break
    else:
        raise SCFError(f"SCF not converged after {max_cycles} cycles")
    # final diagonalization so eps/C are eigenpairs of the converged Fock
    eps, C = _solve(fock(D), X)
    return energy, eps, C, cycle


def _solve(F, X):
    Fp = X.T @ F @ X
    eps, Cp = np.linalg.eigh(Fp)
    return eps, X @ Cp


def _diis_extrapolate(focks, errors):
    m = len(focks)
    B = -np.ones((m + 1, m + 1))
    B[m, m] = 0.0
    for i in range(m):
        for j in range(m):
            B[i, j] = np.einsum("pq,pq->", errors[i], errors[j])
    rhs = np.zeros(m + 1)
    rhs[m] = -1.0
    try:
        w = np.linalg.solve(B, rhs)[:m]
    except np.linalg.LinAlgError:
        return focks[-1]
    return sum(wi * f for wi, f in zip(w, focks))


def _mirror_matrix(funcs, axis=0):
    """AO representation of the reflection that negates one coordinate.
    Requires the basis to be closed under the reflection."""
    n = len(funcs)
    M = np.zeros((n, n))
    for i, f in enumerate(funcs):
        target = f.center.copy()
        target[axis] = -target[axis]
        sign = (-1.0) ** f.lmn[axis]
        for j, g in enumerate(funcs):
            if (g.lmn == f.lmn and np.allclose(g.center, target, atol=1e-8)
                    and g.exps.shape == f.exps.shape
                    and np.allclose(g.exps, f.exps)):
                M[j, i] = sign
                break
        else:
            raise SCFError("basis not closed under mirror symmetry")
    return M


def canonicalize_degenerate(scf, axis=0, tol=1e-6):
    """Rotate each degenerate MO block to diagonalize the mirror symmetry.

    eigh returns an arbitrary rotation inside degenerate subspaces; fixing
    the orbitals to mirror eigenfunctions makes integrals reproducible and
    matches the symmetry-adapted canonical orbitals of standard codes.
    Blocks are ordered by ascending mirror eigenvalue (antisymmetric
    first).  Mutates scf["C"] in place and returns it.
    """
    eps, C, S = scf["orbital_energies"], scf["C"], scf["S"]
    P = _mirror_matrix(scf["funcs"], axis)
    i = 0
    while i < len(eps):
        j = i + 1
        while j < len(eps) and abs(eps[j] - eps[i]) < tol:
            j += 1
        if j - i > 1:
            block = C[:, i:j]
            M = block.T @ S @ P @ block
            w, U = np.linalg.eigh(0.5 * (M + M.T))
            rotated = block @ U
            # deterministic overall sign: largest-magnitude component positive
            for k in range(rotated.shape[1]):
                lead = np.argmax(np.abs(rotated[:, k]))
                if rotated[lead, k] < 0:
                    rotated[:, k] *= -1.0
            C[:, i:j] = rotated
        i = j
    return C


def active_space(scf, active_mo, n_active_electrons):
    """Fold all other occupied orbitals into the core and transform the
    integrals to the active MO basis (chemist ordering).

    active_mo: sorted MO indices kept active.
    Returns (e_core, h1_mo, eri_mo).
    """
    C = scf["C"]
    occupied = list(range(scf["n_occ"]))
    core = [i for i in occupied if i not in active_mo]
    n_from_core = scf["n_electrons"] - 2 * len(core)
    if n_from_core != n_active_electrons:
        raise SCFError(f"active electron count mismatch: {n_from_core} "
                       f"vs requested {n_active_electrons}")
    hcore, eri = scf["hcore"], scf["eri"]
    if core:
        Dc = 2.0 * C[:, core] @ C[:, core].T
        Jc = np.einsum("pqrs,rs->pq", eri, Dc, optimize=True)
        Kc = np.einsum("prqs,rs->pq", eri, Dc, optimize=True)
        heff = hcore + Jc - 0.5 * Kc
        e_core = scf["e_nuc"] + 0.5 * np.einsum("pq,pq->", Dc, hcore + heff)
    else:
        heff = hcore
        e_core = scf["e_nuc"]
    Ca = C[:, list(active_mo)]
    h1_mo = Ca.T @ heff @ Ca
    eri_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", eri, Ca, Ca, Ca, Ca,
                       optimize=True)
    return e_core, h1_mo, eri_mo


def pi_orbital_indices(scf, axis=2, threshold=0.9):
    """MO indices dominated by p-functions along the given axis (the pi
    system of a planar molecule lying in the perpendicular plane)."""
    C = scf["C"]
    weights = np.zeros(C.shape[1])
    pz_rows = [i for i, f in enumerate(scf["funcs"])
               if f.lmn == tuple(int(axis == d) for d in range(3))]
    total = np.einsum("pi,pi->i", C, C)
    if pz_rows:
        w = C[pz_rows, :]
        weights = np.einsum("pi,pi->i", w, w) / total
    return [int(i) for i in np.nonzero(weights > threshold)[0]]

"""Minimal Gaussian basis data (STO-3G for H/Li/C/N, 6-31G for H) and
expansion into normalized contracted cartesian functions."""

import numpy as np

# shells: (l, [exponents], [contraction coefficients])
STO3G = {
    "H": [
        (0, [3.42525091, 0.62391373, 0.16885540],
            [0.15432897, 0.53532814, 0.44463454]),
    ],
    "Li": [
        (0, [16.1195750, 2.9362007, 0.7946505],
            [0.15432897, 0.53532814, 0.44463454]),
        (0, [0.6362897, 0.1478601, 0.0480887],
            [-0.09996723, 0.39951283, 0.70011547]),
        (1, [0.6362897, 0.1478601, 0.0480887],
            [0.15591627, 0.60768372, 0.39195739]),
    ],
    "C": [
        (0, [71.6168370, 13.0450960, 3.5305122],
            [0.15432897, 0.53532814, 0.44463454]),
        (0, [2.9412494, 0.6834831, 0.2222899],
            [-0.09996723, 0.39951283, 0.70011547]),
        (1, [2.9412494, 0.6834831, 0.2222899],
            [0.15591627, 0.60768372, 0.39195739]),
    ],
    "N": [
        (0, [99.1061690, 18.0523120, 4.8856602],
            [0.15432897, 0.53532814, 0.44463454]),
        (0, [3.7804559, 0.8784966, 0.2857144],
            [-0.09996723, 0.39951283, 0.70011547]),
        (1, [3.7804559, 0.8784966, 0.2857144],
            [0.15591627, 0.60768372, 0.39195739]),
    ],
}

G631 = {
    "H": [
        (0, [18.7311370, 2.8253937, 0.6401217],
            [0.03349460, 0.23472695, 0.81375733]),
        (0, [0.1612778], [1.0]),
    ],
}

BASIS_SETS = {"sto-3g": STO3G, "6-31g": G631}

NUCLEAR_CHARGE = {"H": 1, "Li": 3, "C": 6, "N": 7}

ANGSTROM_TO_BOHR = 1.0 / 0.529177210903


def _double_factorial(n):
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def primitive_norm(alpha, lmn):
    l, m, n = lmn
    L = l + m + n
    pref = (2.0 * alpha / np.pi) ** 0.75 * (4.0 * alpha) ** (L / 2.0)
    return pref / np.sqrt(_double_factorial(2 * l - 1) *
                          _double_factorial(2 * m - 1) *
                          _double_factorial(2 * n - 1))


class BasisFunction:
    __slots__ = ("center", "lmn", "exps", "coeffs")

    def __init__(self, center, lmn, exps, coeffs):
        self.center = np.asarray(center, dtype=float)
        self.lmn = tuple(lmn)
        self.exps = np.asarray(exps, dtype=float)
        self.coeffs = np.asarray(coeffs, dtype=float)


def build_basis(atoms, basis_name):
    """atoms: list of (symbol, xyz_bohr). Returns list of BasisFunction with
    primitive and contraction normalization applied."""
    from .integrals import contracted_overlap_self

    data = BASIS_SETS[basis_name.lower()]
    funcs = []
    for symbol, xyz in atoms:
        for l, exps, coeffs in data[symbol]:
            lmns = [(0, 0, 0)] if l == 0 else [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
            for lmn in lmns:
                c = np.array([co * primitive_norm(a, lmn)
                              for a, co in zip(exps, coeffs)])
                f = BasisFunction(xyz, lmn, exps, c)
                norm = contracted_overlap_self(f)
                f.coeffs = c / np.sqrt(norm)
                funcs.append(f)
    return funcs

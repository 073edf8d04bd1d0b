"""McMurchie-Davidson one- and two-electron integrals over contracted
cartesian Gaussians (s and p shells are all we need), jit-compiled."""

import numpy as np
from numba import njit


@njit(cache=True)
def _boys(mmax, x, out):
    if x > 35.0:
        out[0] = 0.5 * np.sqrt(np.pi / x)
        ex = np.exp(-x)
        for m in range(mmax):
            out[m + 1] = ((2 * m + 1) * out[m] - ex) / (2.0 * x)
    else:
        ex = np.exp(-x)
        s = 0.0
        term = 1.0 / (2.0 * mmax + 1.0)
        k = 0
        while True:
            s += term
            k += 1
            term *= 2.0 * x / (2.0 * mmax + 2.0 * k + 1.0)
            if term < 1e-17 * s and k > 3:
                break
        out[mmax] = ex * s
        for m in range(mmax - 1, -1, -1):
            out[m] = (2.0 * x * out[m + 1] + ex) / (2.0 * m + 1.0)


@njit(cache=True)
def _e_table(imax, jmax, Qx, a, b):
    """Hermite expansion coefficients E_t^{ij} for one cartesian direction."""
    p = a + b
    mu = a * b / p
    T = np.zeros((imax + 1, jmax + 1, imax + jmax + 2))
    T[0, 0, 0] = np.exp(-mu * Qx * Qx)
    xpa = -(b / p) * Qx
    xpb = (a / p) * Qx
    for i in range(1, imax + 1):
        for t in range(i + 1):
            val = xpa * T[i - 1, 0, t] + (t + 1) * T[i - 1, 0, t + 1]
            if t > 0:
                val += T[i - 1, 0, t - 1] / (2.0 * p)
            T[i, 0, t] = val
    for j in range(1, jmax + 1):
        for i in range(imax + 1):
            for t in range(i + j + 1):
                val = xpb * T[i, j - 1, t] + (t + 1) * T[i, j - 1, t + 1]
                if t > 0:
                    val += T[i, j - 1, t - 1] / (2.0 * p)
                T[i, j, t] = val
    return T


@njit(cache=True)
def _r_tensor(tmax, umax, vmax, p, X, Y, Z):
    """Hermite Coulomb integrals R_{tuv} at auxiliary order 0."""
    ntot = tmax + umax + vmax
    Fm = np.zeros(ntot + 1)
    _boys(ntot, p * (X * X + Y * Y + Z * Z), Fm)
    R = np.zeros((ntot + 1, tmax + 1, umax + 1, vmax + 1))
    mul = 1.0
    for n in range(ntot + 1):
        R[n, 0, 0, 0] = mul * Fm[n]
        mul *= -2.0 * p
    for t in range(1, tmax + 1):
        for n in range(ntot - t + 1):
            val = X * R[n + 1, t - 1, 0, 0]
            if t > 1:
                val += (t - 1) * R[n + 1, t - 2, 0, 0]
            R[n, t, 0, 0] = val
    for u in range(1, umax + 1):
        for t in range(tmax + 1):
            for n in range(ntot - t - u + 1):
                val = Y * R[n + 1, t, u - 1, 0]
                if u > 1:
                    val += (u - 1) * R[n + 1, t, u - 2, 0]
                R[n, t, u, 0] = val
    for v in range(1, vmax + 1):
        for u in range(umax + 1):
            for t in range(tmax + 1):
                for n in range(ntot - t - u - v + 1):
                    val = Z * R[n + 1, t, u, v - 1]
                    if v > 1:
                        val += (v - 1) * R[n + 1, t, u, v - 2]
                    R[n, t, u, v] = val
    return R[0]


@njit(cache=True)
def _prim_overlap(la, ma, na, lb, mb, nb, a, Ax, Ay, Az, b, Bx, By, Bz):
    p = a + b
    ex = _e_table(la, lb, Ax - Bx, a, b)
    ey = _e_table(ma, mb, Ay - By, a, b)
    ez = _e_table(na, nb, Az - Bz, a, b)
    return ex[la, lb, 0] * ey[ma, mb, 0] * ez[na, nb, 0] * (np.pi / p) ** 1.5


@njit(cache=True)
def _prim_kinetic(la, ma, na, lb, mb, nb, a, Ax, Ay, Az, b, Bx, By, Bz):
    term = b * (2 * (lb + mb + nb) + 3) * _prim_overlap(
        la, ma, na, lb, mb, nb, a, Ax, Ay, Az, b, Bx, By, Bz)
    term += -2.0 * b * b * (
        _prim_overlap(la, ma, na, lb + 2, mb, nb, a, Ax, Ay, Az, b, Bx, By, Bz)
        + _prim_overlap(la, ma, na, lb, mb + 2, nb, a, Ax, Ay, Az, b, Bx, By, Bz)
        + _prim_overlap(la, ma, na, lb, mb, nb + 2, a, Ax, Ay, Az, b, Bx, By, Bz))
    if lb > 1:
        term += -0.5 * lb * (lb - 1) * _prim_overlap(
            la, ma, na, lb - 2, mb, nb, a, Ax, Ay, Az, b, Bx, By, Bz)
    if mb > 1:
        term += -0.5 * mb * (mb - 1) * _prim_overlap(
            la, ma, na, lb, mb - 2, nb, a, Ax, Ay, Az, b, Bx, By, Bz)
    if nb > 1:
        term += -0.5 * nb * (nb - 1) * _prim_overlap(
            la, ma, na, lb, mb, nb - 2, a, Ax, Ay, Az, b, Bx, By, Bz)
    return term


@njit(cache=True)
def _prim_nuclear(la, ma, na, lb, mb, nb, a, Ax, Ay, Az, b, Bx, By, Bz,
                  Cx, Cy, Cz):
    p = a + b
    Px = (a * Ax + b * Bx) / p
    Py = (a * Ay + b * By) / p
    Pz = (a * Az + b * Bz) / p
    ex = _e_table(la, lb, Ax - Bx, a, b)
    ey = _e_table(ma, mb, Ay - By, a, b)
    ez = _e_table(na, nb, Az - Bz, a, b)
    R = _r_tensor(la + lb, ma + mb, na + nb, p, Px - Cx, Py - Cy, Pz - Cz)
    s = 0.0
    for t in range(la + lb + 1):
        for u in range(ma + mb + 1):
            for v in range(na + nb + 1):
                s += ex[la, lb, t] * ey[ma, mb, u] * ez[na, nb, v] * R[t, u, v]
    return 2.0 * np.pi / p * s


@njit(cache=True)
def _prim_eri(la, ma, na, lb, mb, nb, lc, mc, nc, ld, md, nd,
              a, Ax, Ay, Az, b, Bx, By, Bz, c, Cx, Cy, Cz, d, Dx, Dy, Dz):
    p = a + b
    q = c + d
    Px = (a * Ax + b * Bx) / p
    Py = (a * Ay + b * By) / p
    Pz = (a * Az + b * Bz) / p
    Qx = (c * Cx + d * Dx) / q
    Qy = (c * Cy + d * Dy) / q
    Qz = (c * Cz + d * Dz) / q
    e1x = _e_table(la, lb, Ax - Bx, a, b)
    e1y = _e_table(ma, mb, Ay - By, a, b)
    e1z = _e_table(na, nb, Az - Bz, a, b)
    e2x = _e_table(lc, ld, Cx - Dx, c, d)
    e2y = _e_table(mc, md, Cy - Dy, c, d)
    e2z = _e_table(nc, nd, Cz - Dz, c, d)
    alpha = p * q / (p + q)
    R = _r_tensor(la + lb + lc + ld, ma + mb + mc + md, na + nb + nc + nd,
                  alpha, Px - Qx, Py - Qy, Pz - Qz)
    s = 0.0
    for t in range(la + lb + 1):
        for u in range(ma + mb + 1):
            for v in range(na + nb + 1):
                e1 = e1x[la, lb, t] * e1y[ma, mb, u] * e1z[na, nb, v]
                if e1 == 0.0:
                    continue
                for tt in range(lc + ld + 1):
                    for uu in range(mc + md + 1):
                        for vv in range(nc + nd + 1):
                            e2 = e2x[lc, ld, tt] * e2y[mc, md, uu] * e2z[nc, nd, vv]
                            if e2 == 0.0:
                                continue
                            sign = 1.0 if (tt + uu + vv) % 2 == 0 else -1.0
                            s += e1 * e2 * sign * R[t + tt, u + uu, v + vv]
    return s * 2.0 * np.pi ** 2.5 / (p * q * np.sqrt(p + q))


@njit(cache=True)
def _eri_tensor_kernel(centers, powers, pstart, pcount, exps, coeffs):
    nbf = centers.shape[0]
    eri = np.zeros((nbf, nbf, nbf, nbf))
    for i in range(nbf):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(i + 1):
                for l in range(k + 1):
                    kl = k * (k + 1) // 2 + l
                    if kl > ij:
                        continue
                    val = 0.0
                    for pi in range(pstart[i], pstart[i] + pcount[i]):
                        for pj in range(pstart[j], pstart[j] + pcount[j]):
                            for pk in range(pstart[k], pstart[k] + pcount[k]):
                                for pl in range(pstart[l], pstart[l] + pcount[l]):
                                    val += (coeffs[pi] * coeffs[pj]
                                            * coeffs[pk] * coeffs[pl]
                                            * _prim_eri(
                                        powers[i, 0], powers[i, 1], powers[i, 2],
                                        powers[j, 0], powers[j, 1], powers[j, 2],
                                        powers[k, 0], powers[k, 1], powers[k, 2],
                                        powers[l, 0], powers[l, 1], powers[l, 2],
                                        exps[pi], centers[i, 0], centers[i, 1], centers[i, 2],
                                        exps[pj], centers[j, 0], centers[j, 1], centers[j, 2],
                                        exps[pk], centers[k, 0], centers[k, 1], centers[k, 2],
                                        exps[pl], centers[l, 0], centers[l, 1], centers[l, 2]))
                    eri[i, j, k, l] = val
                    eri[j, i, k, l] = val
                    eri[i, j, l, k] = val
                    eri[j, i, l, k] = val
                    eri[k, l, i, j] = val
                    eri[l, k, i, j] = val
                    eri[k, l, j, i] = val
                    eri[l, k, j, i] = val
    return eri


def _pack(funcs):
    centers = np.array([f.center for f in funcs])
    powers = np.array([f.lmn for f in funcs], dtype=np.int64)
    pcount = np.array([len(f.exps) for f in funcs], dtype=np.int64)
    pstart = np.concatenate(([0], np.cumsum(pcount)[:-1])).astype(np.int64)
    exps = np.concatenate([f.exps for f in funcs])
    coeffs = np.concatenate([f.coeffs for f in funcs])
    return centers, powers, pstart, pcount, exps, coeffs


def contracted_overlap_self(f):
    s = 0.0
    la, ma, na = f.lmn
    for a, ca in zip(f.exps, f.coeffs):
        for b, cb in zip(f.exps, f.coeffs):
            s += ca * cb * _prim_overlap(la, ma, na, la, ma, na,
                                         a, *f.center, b, *f.center)
    return s


def one_electron_matrices(funcs, charges_positions):
    """Overlap, kinetic and nuclear-attraction matrices.

    charges_positions: list of (Z, xyz_bohr).
    """
    n = len(funcs)
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i, fi in enumerate(funcs):
        for j, fj in enumerate(funcs):
            if j > i:
                continue
            s = t = v = 0.0
            for a, ca in zip(fi.exps, fi.coeffs):
                for b, cb in zip(fj.exps, fj.coeffs):
                    args = (fi.lmn[0], fi.lmn[1], fi.lmn[2],
                            fj.lmn[0], fj.lmn[1], fj.lmn[2],
                            a, fi.center[0], fi.center[1], fi.center[2],
                            b, fj.center[0], fj.center[1], fj.center[2])
                    s += ca * cb * _prim_overlap(*args)
                    t += ca * cb * _prim_kinetic(*args)
                    for Z, pos in charges_positions:
                        v -= Z * ca * cb * _prim_nuclear(*args, pos[0], pos[1], pos[2])
            S[i, j] = S[j, i] = s
            T[i, j] = T[j, i] = t
            V[i, j] = V[j, i] = v
    return S, T, V


def eri_tensor(funcs):
    return _eri_tensor_kernel(*_pack(funcs))


def nuclear_repulsion(charges_positions):
    e = 0.0
    for i, (zi, ri) in enumerate(charges_positions):
        for zj, rj in charges_positions[:i]:
            e += zi * zj / np.linalg.norm(np.asarray(ri) - np.asarray(rj))
    return e

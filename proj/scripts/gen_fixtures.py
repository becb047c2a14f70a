#!/usr/bin/env python3
"""Generate the FCIDUMP fixtures committed under fixtures/.

Minimal STO-3G RHF pipeline (McMurchie-Davidson integrals, DIIS SCF, MO
transformation) for hydrogen chains and BeH2.  Run once; the outputs are
committed so the C++ test suite stays hermetic.

Usage: python3 scripts/gen_fixtures.py [outdir]
"""

import json
import os
import sys

import numpy as np
from scipy.special import hyp1f1

ANG2BOHR = 1.8897259886

# STO-3G contractions (Basis Set Exchange values)
H_1S = ([3.42525091, 0.62391373, 0.16885540],
        [0.15432897, 0.53532814, 0.44463454])
BE_1S = ([30.1678710, 5.4951153, 1.4871927],
         [0.15432897, 0.53532814, 0.44463454])
BE_2SP_EXP = [1.3148331, 0.3055389, 0.0993707]
BE_2S_COEF = [-0.09996723, 0.39951283, 0.70011547]
BE_2P_COEF = [0.15591627, 0.60768372, 0.39195739]


def boys(n, x):
    return hyp1f1(n + 0.5, n + 1.5, -x) / (2.0 * n + 1.0)


def hermite_e(i, j, t, qx, a, b):
    """Hermite expansion coefficient E_t^{ij} for a Gaussian product."""
    p = a + b
    q = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return np.exp(-q * qx * qx)
    if j == 0:
        return (1.0 / (2 * p) * hermite_e(i - 1, j, t - 1, qx, a, b)
                - q * qx / a * hermite_e(i - 1, j, t, qx, a, b)
                + (t + 1) * hermite_e(i - 1, j, t + 1, qx, a, b))
    return (1.0 / (2 * p) * hermite_e(i, j - 1, t - 1, qx, a, b)
            + q * qx / b * hermite_e(i, j - 1, t, qx, a, b)
            + (t + 1) * hermite_e(i, j - 1, t + 1, qx, a, b))


def overlap_prim(a, la, A, b, lb, B):
    s = 1.0
    for k in range(3):
        s *= hermite_e(la[k], lb[k], 0, A[k] - B[k], a, b)
    return s * (np.pi / (a + b)) ** 1.5


def kinetic_prim(a, la, A, b, lb, B):
    l, m, n = lb
    term0 = b * (2 * (l + m + n) + 3) * overlap_prim(a, la, A, b, lb, B)
    term1 = -2 * b * b * (
        overlap_prim(a, la, A, b, (l + 2, m, n), B)
        + overlap_prim(a, la, A, b, (l, m + 2, n), B)
        + overlap_prim(a, la, A, b, (l, m, n + 2), B))
    term2 = -0.5 * (
        l * (l - 1) * overlap_prim(a, la, A, b, (l - 2, m, n), B)
        + m * (m - 1) * overlap_prim(a, la, A, b, (l, m - 2, n), B)
        + n * (n - 1) * overlap_prim(a, la, A, b, (l, m, n - 2), B))
    return term0 + term1 + term2


def hermite_coulomb(t, u, v, n, p, PC):
    x, y, z = PC
    if t == u == v == 0:
        r2 = x * x + y * y + z * z
        return (-2.0 * p) ** n * boys(n, p * r2)
    if t > 0:
        val = 0.0
        if t > 1:
            val += (t - 1) * hermite_coulomb(t - 2, u, v, n + 1, p, PC)
        val += x * hermite_coulomb(t - 1, u, v, n + 1, p, PC)
        return val
    if u > 0:
        val = 0.0
        if u > 1:
            val += (u - 1) * hermite_coulomb(t, u - 2, v, n + 1, p, PC)
        val += y * hermite_coulomb(t, u - 1, v, n + 1, p, PC)
        return val
    val = 0.0
    if v > 1:
        val += (v - 1) * hermite_coulomb(t, u, v - 2, n + 1, p, PC)
    val += z * hermite_coulomb(t, u, v - 1, n + 1, p, PC)
    return val


def nuclear_prim(a, la, A, b, lb, B, C):
    p = a + b
    P = (a * np.asarray(A) + b * np.asarray(B)) / p
    PC = P - np.asarray(C)
    val = 0.0
    for t in range(la[0] + lb[0] + 1):
        for u in range(la[1] + lb[1] + 1):
            for v in range(la[2] + lb[2] + 1):
                val += (hermite_e(la[0], lb[0], t, A[0] - B[0], a, b)
                        * hermite_e(la[1], lb[1], u, A[1] - B[1], a, b)
                        * hermite_e(la[2], lb[2], v, A[2] - B[2], a, b)
                        * hermite_coulomb(t, u, v, 0, p, PC))
    return 2.0 * np.pi / p * val


def eri_prim(a, la, A, b, lb, B, c, lc, C, d, ld, D):
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = (a * np.asarray(A) + b * np.asarray(B)) / p
    Q = (c * np.asarray(C) + d * np.asarray(D)) / q
    PQ = P - Q
    val = 0.0
    for t in range(la[0] + lb[0] + 1):
        for u in range(la[1] + lb[1] + 1):
            for v in range(la[2] + lb[2] + 1):
                e1 = (hermite_e(la[0], lb[0], t, A[0] - B[0], a, b)
                      * hermite_e(la[1], lb[1], u, A[1] - B[1], a, b)
                      * hermite_e(la[2], lb[2], v, A[2] - B[2], a, b))
                if e1 == 0.0:
                    continue
                for tau in range(lc[0] + ld[0] + 1):
                    for nu in range(lc[1] + ld[1] + 1):
                        for phi in range(lc[2] + ld[2] + 1):
                            e2 = (hermite_e(lc[0], ld[0], tau, C[0] - D[0], c, d)
                                  * hermite_e(lc[1], ld[1], nu, C[1] - D[1], c, d)
                                  * hermite_e(lc[2], ld[2], phi, C[2] - D[2], c, d))
                            if e2 == 0.0:
                                continue
                            val += (e1 * e2 * (-1.0) ** (tau + nu + phi)
                                    * hermite_coulomb(t + tau, u + nu, v + phi,
                                                      0, alpha, PQ))
    return val * 2.0 * np.pi ** 2.5 / (p * q * np.sqrt(p + q))


class BasisFunction:
    def __init__(self, center, lmn, exps, coefs):
        self.center = np.asarray(center, dtype=float)
        self.lmn = tuple(lmn)
        self.exps = list(exps)
        # normalize primitives, then the contraction
        norms = []
        for a in self.exps:
            n2 = overlap_prim(a, self.lmn, self.center, a, self.lmn, self.center)
            norms.append(1.0 / np.sqrt(n2))
        self.coefs = [c * n for c, n in zip(coefs, norms)]
        s = 0.0
        for ci, ai in zip(self.coefs, self.exps):
            for cj, aj in zip(self.coefs, self.exps):
                s += ci * cj * overlap_prim(ai, self.lmn, self.center,
                                            aj, self.lmn, self.center)
        self.coefs = [c / np.sqrt(s) for c in self.coefs]


def build_basis(atoms):
    basis = []
    for sym, pos in atoms:
        pos = np.asarray(pos, dtype=float)
        if sym == "H":
            basis.append(BasisFunction(pos, (0, 0, 0), *H_1S))
        elif sym == "Be":
            basis.append(BasisFunction(pos, (0, 0, 0), *BE_1S))
            basis.append(BasisFunction(pos, (0, 0, 0), BE_2SP_EXP, BE_2S_COEF))
            for k in range(3):
                lmn = [0, 0, 0]
                lmn[k] = 1
                basis.append(BasisFunction(pos, lmn, BE_2SP_EXP, BE_2P_COEF))
        else:
            raise ValueError(sym)
    return basis


def contract1(f, bi, bj, *extra):
    val = 0.0
    for ci, ai in zip(bi.coefs, bi.exps):
        for cj, aj in zip(bj.coefs, bj.exps):
            val += ci * cj * f(ai, bi.lmn, bi.center, aj, bj.lmn, bj.center, *extra)
    return val


def compute_integrals(atoms):
    charges = {"H": 1.0, "Be": 4.0}
    basis = build_basis(atoms)
    n = len(basis)
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            S[i, j] = S[j, i] = contract1(overlap_prim, basis[i], basis[j])
            T[i, j] = T[j, i] = contract1(kinetic_prim, basis[i], basis[j])
            v = 0.0
            for sym, pos in atoms:
                v -= charges[sym] * contract1(nuclear_prim, basis[i], basis[j],
                                              np.asarray(pos, dtype=float))
            V[i, j] = V[j, i] = v
    eri = np.zeros((n, n, n, n))
    done = np.zeros((n, n, n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if done[i, j, k, l]:
                        continue
                    val = 0.0
                    bi, bj, bk, bl = basis[i], basis[j], basis[k], basis[l]
                    for ci, ai in zip(bi.coefs, bi.exps):
                        for cj, aj in zip(bj.coefs, bj.exps):
                            for ck, ak in zip(bk.coefs, bk.exps):
                                for cl, al in zip(bl.coefs, bl.exps):
                                    val += ci * cj * ck * cl * eri_prim(
                                        ai, bi.lmn, bi.center, aj, bj.lmn, bj.center,
                                        ak, bk.lmn, bk.center, al, bl.lmn, bl.center)
                    for (p, q) in ((i, j), (j, i)):
                        for (r, s) in ((k, l), (l, k)):
                            for (a, b, c, d) in ((p, q, r, s), (r, s, p, q)):
                                eri[a, b, c, d] = val
                                done[a, b, c, d] = True
    e_nuc = 0.0
    for x in range(len(atoms)):
        for y in range(x + 1, len(atoms)):
            rx = np.asarray(atoms[x][1], dtype=float)
            ry = np.asarray(atoms[y][1], dtype=float)
            e_nuc += charges[atoms[x][0]] * charges[atoms[y][0]] / np.linalg.norm(rx - ry)
    return S, T + V, eri, e_nuc


def rhf(S, hcore, eri, n_elec, e_nuc, max_iter=2000, tol=1e-12,
        level_shift=0.3, damp=0.35):
    n = S.shape[0]
    nocc = n_elec // 2
    s_eval, s_evec = np.linalg.eigh(S)
    X = s_evec @ np.diag(s_eval ** -0.5) @ s_evec.T
    F = hcore.copy()
    D = None
    diis_F, diis_err = [], []
    e_old = 0.0
    err_max = 1.0
    for it in range(max_iter):
        Fp = X.T @ F @ X
        if err_max > 1e-5 and level_shift > 0.0 and D is not None:
            # shift virtual levels to damp oscillations far from convergence
            Dp = 0.5 * (X.T @ S @ D @ S @ X)
            Fp = Fp + level_shift * (np.eye(n) - Dp)
        eps, Cp = np.linalg.eigh(Fp)
        C = X @ Cp
        Cocc = C[:, :nocc]
        D_new = 2.0 * Cocc @ Cocc.T
        if D is not None and err_max > 1e-5:
            D = (1.0 - damp) * D_new + damp * D
        else:
            D = D_new
        J = np.einsum("pqrs,rs->pq", eri, D)
        K = np.einsum("prqs,rs->pq", eri, D)
        F = hcore + J - 0.5 * K
        e_elec = 0.5 * np.sum(D * (hcore + F))
        err = F @ D @ S - S @ D @ F
        err_max = np.max(np.abs(err))
        if err_max < 1e-3:  # DIIS once roughly converged
            diis_F.append(F.copy())
            diis_err.append(err.copy())
            if len(diis_F) > 8:
                diis_F.pop(0)
                diis_err.pop(0)
            if len(diis_F) > 1:
                m = len(diis_F)
                B = -np.ones((m + 1, m + 1))
                B[m, m] = 0.0
                for a in range(m):
                    for b in range(m):
                        B[a, b] = np.sum(diis_err[a] * diis_err[b])
                rhs = np.zeros(m + 1)
                rhs[m] = -1.0
                try:
                    w = np.linalg.solve(B, rhs)[:m]
                    F = sum(wi * Fi for wi, Fi in zip(w, diis_F))
                except np.linalg.LinAlgError:
                    pass
        if abs(e_elec - e_old) < tol and err_max < 1e-9:
            return e_elec + e_nuc, eps, C
        e_old = e_elec
    raise RuntimeError(f"SCF not converged after {max_iter} iterations "
                       f"(dE={abs(e_elec - e_old):.2e})")


def mo_transform(hcore, eri, C):
    h_mo = C.T @ hcore @ C
    g = np.einsum("pqrs,pi->iqrs", eri, C, optimize=True)
    g = np.einsum("iqrs,qj->ijrs", g, C, optimize=True)
    g = np.einsum("ijrs,rk->ijks", g, C, optimize=True)
    g = np.einsum("ijks,sl->ijkl", g, C, optimize=True)
    return h_mo, g


def mp2_corr(g_mo, eps, nocc, n):
    e = 0.0
    for i in range(nocc):
        for j in range(nocc):
            for a in range(nocc, n):
                for b in range(nocc, n):
                    iajb = g_mo[i, a, j, b]
                    ibja = g_mo[i, b, j, a]
                    e += iajb * (2.0 * iajb - ibja) / (
                        eps[i] + eps[j] - eps[a] - eps[b])
    return e


def write_fcidump(path, h_mo, g_mo, e_nuc, n_elec, thresh=1e-12):
    n = h_mo.shape[0]
    with open(path, "w") as f:
        f.write(f"&FCI NORB={n:3d},NELEC={n_elec:3d},MS2=0,\n")
        f.write("  ORBSYM=" + "1," * n + "\n")
        f.write("  ISYM=1,\n")
        f.write("&END\n")
        for p in range(n):
            for q in range(p + 1):
                for r in range(p + 1):
                    smax = q if r == p else r
                    for s in range(smax + 1):
                        v = g_mo[p, q, r, s]
                        if abs(v) > thresh:
                            f.write(f" {v: .16e} {p+1:3d} {q+1:3d} {r+1:3d} {s+1:3d}\n")
        for p in range(n):
            for q in range(p + 1):
                v = h_mo[p, q]
                if abs(v) > thresh:
                    f.write(f" {v: .16e} {p+1:3d} {q+1:3d}   0   0\n")
        f.write(f" {e_nuc: .16e}   0   0   0   0\n")


def h_chain(n_atoms, bond_ang):
    d = bond_ang * ANG2BOHR
    return [("H", (i * d, 0.0, 0.0)) for i in range(n_atoms)]


def beh2(y_ang):
    d = 1.0 * ANG2BOHR
    return [("Be", (0.0, y_ang * ANG2BOHR, 0.0)),
            ("H", (-d, 0.0, 0.0)), ("H", (d, 0.0, 0.0))]


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "fixtures"
    os.makedirs(outdir, exist_ok=True)
    systems = []
    systems.append(("h2_0.7414", h_chain(2, 0.7414), 2, 0.7414))
    for r in (0.6, 0.8, 1.2, 1.6, 2.0, 2.4):
        systems.append((f"h4_{r}", h_chain(4, r), 4, r))
        systems.append((f"h6_{r}", h_chain(6, r), 6, r))
    for r in (0.8, 1.6, 2.4):
        systems.append((f"h8_{r}", h_chain(8, r), 8, r))
    systems.append(("h10_1.0", h_chain(10, 1.0), 10, 1.0))
    for y in (0.0, 1.0, 1.75, 2.4):
        systems.append((f"beh2_{y}", beh2(y), 6, y))

    manifest = {}
    for label, atoms, n_elec, geom in systems:
        print(f"[{label}] integrals...", flush=True)
        S, hcore, eri, e_nuc = compute_integrals(atoms)
        e_hf, eps, C = rhf(S, hcore, eri, n_elec, e_nuc)
        # fix MO sign convention: largest-|c| element positive
        for k in range(C.shape[1]):
            idx = np.argmax(np.abs(C[:, k]))
            if C[idx, k] < 0:
                C[:, k] = -C[:, k]
        h_mo, g_mo = mo_transform(hcore, eri, C)
        nocc = n_elec // 2
        e_mp2 = mp2_corr(g_mo, eps, nocc, len(eps))
        path = os.path.join(outdir, f"{label}.fcidump")
        write_fcidump(path, h_mo, g_mo, e_nuc, n_elec)
        manifest[label] = {
            "fcidump": f"{label}.fcidump",
            "geometry": geom,
            "e_nuc": e_nuc,
            "e_hf": e_hf,
            "e_mp2_corr": e_mp2,
            "orbital_energies": list(eps),
        }
        print(f"  E_HF = {e_hf:.10f}  E_MP2corr = {e_mp2:.10f}")
    with open(os.path.join(outdir, "reference.json"), "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
    print("done")


if __name__ == "__main__":
    main()

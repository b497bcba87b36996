#!/usr/bin/env python3
"""Generate the FCIDUMP fixtures and the reference manifest under tests/fixtures/.

Self-contained STO-3G integral, RHF, MP2, and FCI reference implementation
(numpy/scipy only).  Runs independently of the C++ library so the recorded
reference values cross-check it rather than mirror it.

Usage: python3 scripts/make_fixtures.py [outdir]
"""

import itertools
import json
import math
import os
import sys

import numpy as np
from scipy.linalg import eigh
from scipy.sparse.linalg import eigsh
from scipy.special import gamma, gammainc

ANGSTROM_TO_BOHR = 1.0 / 0.52917721092

# ---------------------------------------------------------------------------
# STO-3G basis: universal 3-Gaussian fits to Slater 1s / 2sp functions
# (Hehre, Stewart, Pople 1969), scaled by the standard molecular Slater
# exponents zeta via alpha -> alpha * zeta^2.
# ---------------------------------------------------------------------------

FIT_1S_EXP = (2.227660584, 0.405771156, 0.109818000)
FIT_1S_COEF = (0.154328967, 0.535328142, 0.444634542)
FIT_2SP_EXP = (0.994203000, 0.231031000, 0.075138600)
FIT_2S_COEF = (-0.099967230, 0.399512830, 0.700115470)
FIT_2P_COEF = (0.155916270, 0.607683720, 0.391957390)

# zeta_1s, zeta_2sp (None for H: 1s only)
ZETA = {
    "H": (1.24, None),
    "Li": (2.69, 0.80),
    "Be": (3.68, 1.15),
    "C": (5.67, 1.72),
    "N": (6.67, 1.95),
    "O": (7.66, 2.25),
}

CHARGE = {"H": 1, "Li": 3, "Be": 4, "C": 6, "N": 7, "O": 8}


def primitive_norm(alpha, lmn):
    l, m, n = lmn
    L = l + m + n
    df = lambda k: math.prod(range(2 * k - 1, 0, -2)) if k > 0 else 1
    return ((2 * alpha / math.pi) ** 0.75) * ((4 * alpha) ** (L / 2)) / math.sqrt(
        df(l) * df(m) * df(n)
    )


class ContractedGaussian:
    def __init__(self, center, lmn, exps, coefs):
        self.center = np.asarray(center, dtype=float)
        self.lmn = tuple(lmn)
        self.exps = list(exps)
        self.coefs = [c * primitive_norm(a, lmn) for a, c in zip(exps, coefs)]
        s = overlap_cgf(self, self)
        self.coefs = [c / math.sqrt(s) for c in self.coefs]


def build_basis(atoms):
    """atoms: list of (symbol, xyz in bohr). Returns list of ContractedGaussian."""
    basis = []
    for sym, xyz in atoms:
        z1, z2 = ZETA[sym]
        e1 = [a * z1 * z1 for a in FIT_1S_EXP]
        basis.append(ContractedGaussian(xyz, (0, 0, 0), e1, FIT_1S_COEF))
        if z2 is not None:
            e2 = [a * z2 * z2 for a in FIT_2SP_EXP]
            basis.append(ContractedGaussian(xyz, (0, 0, 0), e2, FIT_2S_COEF))
            for lmn in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                basis.append(ContractedGaussian(xyz, lmn, e2, FIT_2P_COEF))
    return basis


# ---------------------------------------------------------------------------
# McMurchie-Davidson integrals
# ---------------------------------------------------------------------------


def hermite_e(i, j, t, Qx, a, b):
    p = a + b
    q = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-q * Qx * Qx)
    if j == 0:
        return (
            (1.0 / (2.0 * p)) * hermite_e(i - 1, j, t - 1, Qx, a, b)
            - (q * Qx / a) * hermite_e(i - 1, j, t, Qx, a, b)
            + (t + 1) * hermite_e(i - 1, j, t + 1, Qx, a, b)
        )
    return (
        (1.0 / (2.0 * p)) * hermite_e(i, j - 1, t - 1, Qx, a, b)
        + (q * Qx / b) * hermite_e(i, j - 1, t, Qx, a, b)
        + (t + 1) * hermite_e(i, j - 1, t + 1, Qx, a, b)
    )


def overlap_prim(a, lmn1, A, b, lmn2, B):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    p = a + b
    s = (
        hermite_e(l1, l2, 0, A[0] - B[0], a, b)
        * hermite_e(m1, m2, 0, A[1] - B[1], a, b)
        * hermite_e(n1, n2, 0, A[2] - B[2], a, b)
    )
    return s * (math.pi / p) ** 1.5


def overlap_cgf(g1, g2):
    s = 0.0
    for a, ca in zip(g1.exps, g1.coefs):
        for b, cb in zip(g2.exps, g2.coefs):
            s += ca * cb * overlap_prim(a, g1.lmn, g1.center, b, g2.lmn, g2.center)
    return s


def kinetic_prim(a, lmn1, A, b, lmn2, B):
    l2, m2, n2 = lmn2
    term0 = b * (2 * (l2 + m2 + n2) + 3) * overlap_prim(a, lmn1, A, b, lmn2, B)
    term1 = (
        -2.0
        * b
        * b
        * (
            overlap_prim(a, lmn1, A, b, (l2 + 2, m2, n2), B)
            + overlap_prim(a, lmn1, A, b, (l2, m2 + 2, n2), B)
            + overlap_prim(a, lmn1, A, b, (l2, m2, n2 + 2), B)
        )
    )
    term2 = -0.5 * (
        l2 * (l2 - 1) * overlap_prim(a, lmn1, A, b, (l2 - 2, m2, n2), B)
        + m2 * (m2 - 1) * overlap_prim(a, lmn1, A, b, (l2, m2 - 2, n2), B)
        + n2 * (n2 - 1) * overlap_prim(a, lmn1, A, b, (l2, m2, n2 - 2), B)
    )
    return term0 + term1 + term2


def kinetic_cgf(g1, g2):
    s = 0.0
    for a, ca in zip(g1.exps, g1.coefs):
        for b, cb in zip(g2.exps, g2.coefs):
            s += ca * cb * kinetic_prim(a, g1.lmn, g1.center, b, g2.lmn, g2.center)
    return s


def boys(n, T):
    if T < 1e-12:
        return 1.0 / (2 * n + 1) - T / (2 * n + 3)
    return gamma(n + 0.5) * gammainc(n + 0.5, T) / (2.0 * T ** (n + 0.5))


def hermite_r(t, u, v, n, p, PC):
    if t == u == v == 0:
        T = p * (PC[0] ** 2 + PC[1] ** 2 + PC[2] ** 2)
        return (-2.0 * p) ** n * boys(n, T)
    if t == u == 0:
        val = PC[2] * hermite_r(t, u, v - 1, n + 1, p, PC)
        if v > 1:
            val += (v - 1) * hermite_r(t, u, v - 2, n + 1, p, PC)
        return val
    if t == 0:
        val = PC[1] * hermite_r(t, u - 1, v, n + 1, p, PC)
        if u > 1:
            val += (u - 1) * hermite_r(t, u - 2, v, n + 1, p, PC)
        return val
    val = PC[0] * hermite_r(t - 1, u, v, n + 1, p, PC)
    if t > 1:
        val += (t - 1) * hermite_r(t - 2, u, v, n + 1, p, PC)
    return val


def nuclear_prim(a, lmn1, A, b, lmn2, B, C):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    p = a + b
    P = (a * A + b * B) / p
    PC = P - C
    val = 0.0
    for t in range(l1 + l2 + 1):
        et = hermite_e(l1, l2, t, A[0] - B[0], a, b)
        for u in range(m1 + m2 + 1):
            eu = hermite_e(m1, m2, u, A[1] - B[1], a, b)
            for v in range(n1 + n2 + 1):
                ev = hermite_e(n1, n2, v, A[2] - B[2], a, b)
                val += et * eu * ev * hermite_r(t, u, v, 0, p, PC)
    return val * 2.0 * math.pi / p


def nuclear_cgf(g1, g2, atoms):
    s = 0.0
    for a, ca in zip(g1.exps, g1.coefs):
        for b, cb in zip(g2.exps, g2.coefs):
            for sym, xyz in atoms:
                s -= (
                    CHARGE[sym]
                    * ca
                    * cb
                    * nuclear_prim(a, g1.lmn, g1.center, b, g2.lmn, g2.center, np.asarray(xyz))
                )
    return s


def eri_prim(a, lmn1, A, b, lmn2, B, c, lmn3, C, d, lmn4, D):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    l3, m3, n3 = lmn3
    l4, m4, n4 = lmn4
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = (a * A + b * B) / p
    Q = (c * C + d * D) / q
    PQ = P - Q
    val = 0.0
    for t in range(l1 + l2 + 1):
        e1 = hermite_e(l1, l2, t, A[0] - B[0], a, b)
        for u in range(m1 + m2 + 1):
            e2 = hermite_e(m1, m2, u, A[1] - B[1], a, b)
            for v in range(n1 + n2 + 1):
                e3 = hermite_e(n1, n2, v, A[2] - B[2], a, b)
                for tau in range(l3 + l4 + 1):
                    e4 = hermite_e(l3, l4, tau, C[0] - D[0], c, d)
                    for nu in range(m3 + m4 + 1):
                        e5 = hermite_e(m3, m4, nu, C[1] - D[1], c, d)
                        for phi in range(n3 + n4 + 1):
                            e6 = hermite_e(n3, n4, phi, C[2] - D[2], c, d)
                            val += (
                                e1
                                * e2
                                * e3
                                * e4
                                * e5
                                * e6
                                * (-1.0) ** (tau + nu + phi)
                                * hermite_r(t + tau, u + nu, v + phi, 0, alpha, PQ)
                            )
    return val * 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))


def eri_cgf(g1, g2, g3, g4):
    s = 0.0
    for a, ca in zip(g1.exps, g1.coefs):
        for b, cb in zip(g2.exps, g2.coefs):
            for c, cc in zip(g3.exps, g3.coefs):
                for d, cd in zip(g4.exps, g4.coefs):
                    s += ca * cb * cc * cd * eri_prim(
                        a, g1.lmn, g1.center,
                        b, g2.lmn, g2.center,
                        c, g3.lmn, g3.center,
                        d, g4.lmn, g4.center,
                    )
    return s


def ao_integrals(atoms):
    basis = build_basis(atoms)
    n = len(basis)
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            S[i, j] = S[j, i] = overlap_cgf(basis[i], basis[j])
            T[i, j] = T[j, i] = kinetic_cgf(basis[i], basis[j])
            V[i, j] = V[j, i] = nuclear_cgf(basis[i], basis[j], atoms)
    eri = np.zeros((n, n, n, n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1)]
    for ij, (i, j) in enumerate(pairs):
        for kl in range(ij + 1):
            k, l = pairs[kl]
            v = eri_cgf(basis[i], basis[j], basis[k], basis[l])
            for (p, q), (r, s) in ((a, b) for a in ((i, j), (j, i)) for b in ((k, l), (l, k))):
                eri[p, q, r, s] = v
                eri[r, s, p, q] = v
    return S, T, V, eri


def nuclear_repulsion(atoms):
    e = 0.0
    for (s1, x1), (s2, x2) in itertools.combinations(atoms, 2):
        e += CHARGE[s1] * CHARGE[s2] / np.linalg.norm(np.asarray(x1) - np.asarray(x2))
    return e


# ---------------------------------------------------------------------------
# RHF with DIIS
# ---------------------------------------------------------------------------


def rhf(atoms, n_electrons, max_iter=200):
    S, T, V, eri = ao_integrals(atoms)
    hcore = T + V
    e_nuc = nuclear_repulsion(atoms)
    n = len(S)
    nocc = n_electrons // 2
    assert 2 * nocc == n_electrons

    sval, svec = np.linalg.eigh(S)
    X = svec @ np.diag(sval ** -0.5) @ svec.T

    def fock(D):
        J = np.einsum("pqrs,rs->pq", eri, D)
        K = np.einsum("prqs,rs->pq", eri, D)
        return hcore + 2.0 * J - K

    D = np.zeros((n, n))
    e_old = 0.0
    errs, focks = [], []
    for it in range(max_iter):
        F = fock(D)
        err = X.T @ (F @ D @ S - S @ D @ F) @ X
        errs.append(err)
        focks.append(F)
        if len(errs) > 8:
            errs.pop(0)
            focks.pop(0)
        if len(errs) > 1:
            m = len(errs)
            B = -np.ones((m + 1, m + 1))
            B[m, m] = 0.0
            for i in range(m):
                for j in range(m):
                    B[i, j] = np.einsum("pq,pq->", errs[i], errs[j])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                w = np.linalg.solve(B, rhs)[:m]
                F = sum(wi * Fi for wi, Fi in zip(w, focks))
            except np.linalg.LinAlgError:
                pass
        eps, C_prime = np.linalg.eigh(X.T @ F @ X)
        C = X @ C_prime
        D = C[:, :nocc] @ C[:, :nocc].T
        e_elec = np.einsum("pq,pq->", D, hcore + fock(D))
        if abs(e_elec - e_old) < 1e-13 and it > 2:
            break
        e_old = e_elec
    F = fock(D)
    eps, C_prime = np.linalg.eigh(X.T @ F @ X)
    C = X @ C_prime
    D = C[:, :nocc] @ C[:, :nocc].T
    e_elec = np.einsum("pq,pq->", D, hcore + fock(D))
    return {
        "e_tot": e_elec + e_nuc,
        "e_nuc": e_nuc,
        "mo_energy": eps,
        "C": C,
        "hcore": hcore,
        "eri_ao": eri,
        "nocc": nocc,
    }


def mo_integrals(scf):
    C = scf["C"]
    h = C.T @ scf["hcore"] @ C
    eri = np.einsum("pqrs,pi,qj,rk,sl->ijkl", scf["eri_ao"], C, C, C, C, optimize=True)
    return h, eri


def mp2_energy(scf, h, eri):
    nocc = scf["nocc"]
    n = h.shape[0]
    eps = scf["mo_energy"]
    e = 0.0
    for i in range(nocc):
        for j in range(nocc):
            for a in range(nocc, n):
                for b in range(nocc, n):
                    iajb = eri[i, a, j, b]
                    ibja = eri[i, b, j, a]
                    e += iajb * (2.0 * iajb - ibja) / (eps[i] + eps[j] - eps[a] - eps[b])
    return e


# ---------------------------------------------------------------------------
# FCI (dense, bitmask determinants, Slater-Condon in spin orbitals)
# spin orbital s = 2p + sigma, sigma=0 alpha, 1 beta
# ---------------------------------------------------------------------------


def fci_ground(h, eri, n_orb, n_alpha, n_beta, e_core):
    dets = []
    for occ_a in itertools.combinations(range(n_orb), n_alpha):
        ma = sum(1 << p for p in occ_a)
        for occ_b in itertools.combinations(range(n_orb), n_beta):
            mb = sum(1 << p for p in occ_b)
            dets.append((ma, mb))
    dets.sort()
    ndet = len(dets)

    def word(d):
        w = 0
        for p in range(n_orb):
            if d[0] >> p & 1:
                w |= 1 << (2 * p)
            if d[1] >> p & 1:
                w |= 1 << (2 * p + 1)
        return w

    words = [word(d) for d in dets]

    def h_so(s, t):
        if (s ^ t) & 1:
            return 0.0
        return h[s >> 1, t >> 1]

    def anti(s, t, u, v):
        val = 0.0
        if (s & 1) == (u & 1) and (t & 1) == (v & 1):
            val += eri[s >> 1, u >> 1, t >> 1, v >> 1]
        if (s & 1) == (v & 1) and (t & 1) == (u & 1):
            val -= eri[s >> 1, v >> 1, t >> 1, u >> 1]
        return val

    def occ_list(w):
        return [s for s in range(2 * n_orb) if w >> s & 1]

    def pair_sign(w, holes, parts):
        sign = 1
        for x in holes:
            below = (w & ((1 << x) - 1)).bit_count()
            sign *= -1 if below & 1 else 1
            w &= ~(1 << x)
        for x in parts:
            below = (w & ((1 << x) - 1)).bit_count()
            sign *= -1 if below & 1 else 1
            w |= 1 << x
        return sign

    H = np.zeros((ndet, ndet))
    occs = [occ_list(w) for w in words]
    for i in range(ndet):
        wi = words[i]
        oi = occs[i]
        d = 0.0
        for s in oi:
            d += h_so(s, s)
        for a in range(len(oi)):
            for b in range(a + 1, len(oi)):
                d += anti(oi[a], oi[b], oi[a], oi[b])
        H[i, i] = d
        for j in range(i + 1, ndet):
            x = wi ^ words[j]
            nx = x.bit_count()
            if nx > 4:
                continue
            wj = words[j]
            holes = [s for s in range(2 * n_orb) if (x >> s & 1) and (wj >> s & 1)]
            parts = [s for s in range(2 * n_orb) if (x >> s & 1) and (wi >> s & 1)]
            if nx == 2:
                hh, pp = holes[0], parts[0]
                g = pair_sign(wj, [hh], [pp])
                val = h_so(pp, hh)
                common = wi & wj
                for u in occ_list(common):
                    val += anti(pp, u, hh, u)
                H[i, j] = H[j, i] = g * val
            else:
                h1, h2 = holes
                p1, p2 = parts
                g = pair_sign(wj, [h1, h2], [p2, p1])
                H[i, j] = H[j, i] = g * anti(p1, p2, h1, h2)
    if ndet <= 1200:
        w = eigh(H, eigvals_only=True, subset_by_index=[0, 0])[0]
    else:
        v0 = np.ones(ndet)
        w = eigsh(H, k=1, which="SA", v0=v0, maxiter=5000, tol=0)[0][0]
    return w + e_core, ndet


# ---------------------------------------------------------------------------
# FCIDUMP writer
# ---------------------------------------------------------------------------


def write_fcidump(path, h, eri, n_orb, n_electrons, e_core, thresh=1e-14):
    lines = []
    lines.append(f"&FCI NORB={n_orb:3d},NELEC={n_electrons:3d},MS2= 0,")
    lines.append("  ORBSYM=" + ",".join(["1"] * n_orb) + ",")
    lines.append("  ISYM=1,")
    lines.append(" &END")

    def rec(v, i, j, k, l):
        lines.append(f" {v: .16E} {i:4d} {j:4d} {k:4d} {l:4d}")

    for p in range(n_orb):
        for q in range(p + 1):
            pq = p * (p + 1) // 2 + q
            for r in range(p + 1):
                for s in range(r + 1):
                    rs = r * (r + 1) // 2 + s
                    if rs > pq:
                        continue
                    v = eri[p, q, r, s]
                    if abs(v) > thresh:
                        rec(v, p + 1, q + 1, r + 1, s + 1)
    for p in range(n_orb):
        for q in range(p + 1):
            if abs(h[p, q]) > thresh:
                rec(h[p, q], p + 1, q + 1, 0, 0)
    rec(e_core, 0, 0, 0, 0)
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Molecules (experimental geometries, CCCBDB)
# ---------------------------------------------------------------------------


def geom_h2():
    r = 0.7414 * ANGSTROM_TO_BOHR
    return [("H", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, r))]


def geom_lih():
    r = 1.5949 * ANGSTROM_TO_BOHR
    return [("Li", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, r))]


def geom_beh2():
    r = 1.3264 * ANGSTROM_TO_BOHR
    return [("Be", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, r)), ("H", (0.0, 0.0, -r))]


def geom_nh3():
    r = 1.0124 * ANGSTROM_TO_BOHR
    hnh = math.radians(106.67)
    cos_t2 = (1.0 + 2.0 * math.cos(hnh)) / 3.0
    cos_t = math.sqrt(cos_t2) if cos_t2 > 0 else 0.0
    sin_t = math.sqrt(1.0 - cos_t2)
    atoms = [("N", (0.0, 0.0, 0.0))]
    for k in range(3):
        phi = 2.0 * math.pi * k / 3.0
        atoms.append(
            ("H", (r * sin_t * math.cos(phi), r * sin_t * math.sin(phi), r * cos_t))
        )
    return atoms


def geom_ch2o():
    rco = 1.2050 * ANGSTROM_TO_BOHR
    rch = 1.1110 * ANGSTROM_TO_BOHR
    hch = math.radians(116.13)
    half = hch / 2.0
    return [
        ("C", (0.0, 0.0, 0.0)),
        ("O", (0.0, 0.0, rco)),
        ("H", (rch * math.sin(half), 0.0, -rch * math.cos(half))),
        ("H", (-rch * math.sin(half), 0.0, -rch * math.cos(half))),
    ]


MOLECULES = {
    "h2_sto3g": (geom_h2, 2, True),
    "lih_sto3g": (geom_lih, 4, True),
    "beh2_sto3g": (geom_beh2, 6, True),
    "nh3_sto3g": (geom_nh3, 10, True),
    "ch2o_sto3g": (geom_ch2o, 16, False),  # FCI dim 245,025: skipped
}


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "tests", "fixtures"
    )
    os.makedirs(outdir, exist_ok=True)
    manifest = {}
    for name, (geom_fn, nelec, do_fci) in MOLECULES.items():
        atoms = geom_fn()
        print(f"=== {name}: nelec={nelec}")
        scf = rhf(atoms, nelec)
        h, eri = mo_integrals(scf)
        n_orb = h.shape[0]
        e_mp2_corr = mp2_energy(scf, h, eri)
        entry = {
            "n_orbitals": n_orb,
            "n_electrons": nelec,
            "ms2": 0,
            "core_energy": scf["e_nuc"],
            "e_hf_total": scf["e_tot"],
            "e_mp2_corr": e_mp2_corr,
            "e_mp2_total": scf["e_tot"] + e_mp2_corr,
            "orbital_energies": list(scf["mo_energy"]),
            "geometry_bohr": [[s, list(x)] for s, x in atoms],
        }
        if do_fci:
            e_fci, ndet = fci_ground(h, eri, n_orb, nelec // 2, nelec // 2, scf["e_nuc"])
            entry["e_fci_total"] = e_fci
            entry["fci_dimension"] = ndet
            print(f"    HF {scf['e_tot']:.10f}  MP2corr {e_mp2_corr:.10f}  FCI {e_fci:.10f} ({ndet} dets)")
        else:
            print(f"    HF {scf['e_tot']:.10f}  MP2corr {e_mp2_corr:.10f}")
        if name == "h2_sto3g":
            entry["two_electron_1111"] = eri[0, 0, 0, 0]
        write_fcidump(os.path.join(outdir, name + ".fcidump"), h, eri, n_orb, nelec, scf["e_nuc"])
        manifest[name] = entry
    with open(os.path.join(outdir, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")
    print("wrote", os.path.join(outdir, "manifest.json"))


if __name__ == "__main__":
    main()

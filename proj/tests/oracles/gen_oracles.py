"""Independent numpy/scipy reference values for the C++ regression tests.

Run once; output is frozen into frozen.json next to this file.
"""
import json
import sys
import time

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as sla
from scipy.special import jv

ANCHOR = dict(EL=1e-3, ECp=0.378, ECt=1.75e-4, EJ=0.165)


def ho_dvr(N, ECp, EL):
    phi0 = (4 * ECp / EL) ** 0.25
    a = np.diag(np.sqrt(np.arange(1, N)), 1)
    x = (a + a.T) / np.sqrt(2) * phi0
    n = 1j * (a.T - a) / (np.sqrt(2) * phi0)
    h0 = 4 * np.sqrt(ECp * EL) * np.diag(np.arange(N) + 0.5)
    w, V = np.linalg.eigh(x)
    return w, V, h0, n


def bo_fit(N, p):
    w, V, h0, _ = ho_dvr(N, p["ECp"], p["EL"])
    th = -np.pi / 2 + 2 * np.pi * np.arange(81) / 81
    coef = {}
    for pe in (0.0, np.pi / 2, np.pi):
        c = V @ np.diag(np.cos(w - pe / 2)) @ V.T
        E = np.array([np.linalg.eigvalsh(h0 - 2 * p["EJ"] * np.cos(t) * c)[0] for t in th])
        coef[pe] = (-2 * np.mean(E * np.cos(2 * th)), -2 * np.mean(E * np.cos(th)))
    e2_0, e1_0 = coef[0.0]
    e2_pi, _ = coef[np.pi]
    return dict(E_alpha=(e2_0 + e2_pi) / 2, E_beta=(e2_pi - e2_0) / 2, E_gamma=e1_0)


def h2d(N, nmax, p, pext=0.0, ng=0.0):
    w, V, h0, _ = ho_dvr(N, p["ECp"], p["EL"])
    h0d = V.T @ h0 @ V
    ns = np.arange(-nmax, nmax + 1)
    d = len(ns)
    H = sp.kron(sp.diags(4 * p["ECt"] * (ns - ng) ** 2), sp.eye(N)) + sp.kron(sp.eye(d), sp.csr_matrix(h0d))
    sh = sp.diags(np.ones(d - 1), 1)
    H = H - p["EJ"] * sp.kron(sh + sh.T, sp.diags(np.cos(w - pext / 2)))
    nth = sp.kron(sp.diags(ns.astype(float)), sp.eye(N))
    return H.tocsc(), nth


def low_states(N, nmax, p, M):
    H, nth = h2d(N, nmax, p)
    e, v = sla.eigsh(H, k=M, sigma=-0.5, which="LM")
    o = np.argsort(e)
    e, v = e[o], v[:, o]
    return e, v.T @ (nth @ v)


def square_gate(e, nt, om, t):
    H = np.diag(e - e[0]) + om * nt
    ev, V = np.linalg.eigh(H)
    U = V @ np.diag(np.exp(-1j * ev * t)) @ V.conj().T
    u = U[:2, :2]
    W, s, Vh = np.linalg.svd(u)
    uc = W @ Vh
    m = uc.conj().T @ u
    F = (np.trace(m @ m.conj().T).real + abs(np.trace(m)) ** 2) / 6
    return F, float(np.max(np.abs(1 - s)))


def cooling_rates(c, nmax=50):
    g, eps, wm, wb, wz, kb = c["g"], c["eps"], c["wm"], c["wb"], c["wz"], c["kb"]
    x = eps / wm
    r = eps / (4 * wb)
    gp = g * (jv(1, x) - r * (jv(0, x) + jv(2, x)))
    gd_s = 4 * gp ** 2 / kb
    gu_s = gd_s / ((2 * wz / (kb / 2)) ** 2 + 1)
    L = lambda dd: kb * g * g / (dd * dd + kb * kb / 4)
    J = lambda k: jv(k, x)
    gd = gu = 0.0
    for n in range(-nmax, nmax + 1):
        gd += J(n) ** 2 * (L(wz - wb + n * wm) + r * r * (L(wz - wb + (n - 1) * wm) + L(wz - wb + (n + 1) * wm)))
        gd += 2 * r * J(n) * J(n + 1) * (L(wz - wb - n * wm) + L(wz - wb - (n + 1) * wm))
        gd += 2 * r * r * J(n) * J(n + 2) * L(wz - wb - (n + 1) * wm)
        gu += J(n) ** 2 * (L(wz + wb - n * wm) + r * r * (L(wz + wb - (n + 1) * wm) + L(wz + wb - (n - 1) * wm)))
        gu += 2 * r * J(n) * J(n + 1) * (L(wz + wb + n * wm) + L(wz + wb + (n + 1) * wm))
        gu += 2 * r * r * J(n) * J(n + 2) * L(wz + wb + (n + 1) * wm)
    return dict(g_prime=gp, gamma_down=gd_s, gamma_up=gu_s, gamma_down_full=gd, gamma_up_full=gu)


def two_mode_me(c, Na, Nb, tmax, dt):
    a1 = np.diag(np.sqrt(np.arange(1, Na)), 1)
    b1 = np.diag(np.sqrt(np.arange(1, Nb)), 1)
    A = np.kron(a1, np.eye(Nb))
    B = np.kron(np.eye(Na), b1)
    Ad, Bd = A.T, B.T
    nA, nB = Ad @ A, Bd @ B
    X = (Ad - A) @ (Bd - B)
    kz, nth, kb = c["kz"], c["nth"], c["kb"]

    def D(L, r):
        Ld = L.conj().T
        return L @ r @ Ld - 0.5 * (Ld @ L @ r + r @ Ld @ L)

    def rhs(t, r):
        wbt = c["wb"] + c["eps"] * np.cos(c["wm"] * t)
        gt = c["g"] * (1 + c["eps"] / (2 * c["wb"]) * np.cos(c["wm"] * t))
        H = c["wz"] * nA + wbt * nB - gt * X
        return -1j * (H @ r - r @ H) + kz * (nth + 1) * D(A, r) + kz * nth * D(Ad, r) + kb * D(B, r)

    p = (nth / (1 + nth)) ** np.arange(Na)
    p /= p.sum()
    r = np.kron(np.diag(p), np.diag([1.0] + [0.0] * (Nb - 1))).astype(complex)
    steps = int(round(tmax / dt))
    T = 2 * np.pi / c["wm"]
    tail = []
    for k in range(steps):
        t = k * dt
        k1 = rhs(t, r)
        k2 = rhs(t + dt / 2, r + dt / 2 * k1)
        k3 = rhs(t + dt / 2, r + dt / 2 * k2)
        k4 = rhs(t + dt, r + dt * k3)
        r = r + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if (k + 1) * dt > tmax - 5 * T:
            tail.append(np.trace(nA @ r).real)
    return float(np.mean(tail))


def main():
    out = {}
    t0 = time.time()
    out["bo_anchor_N300"] = bo_fit(300, ANCHOR)
    e, nt = low_states(200, 20, ANCHOR, 40)
    out["h2d_anchor_N200_n20"] = dict(levels=list(e[:12] - e[0]), ground=float(e[0]))
    F, d = square_gate(e, nt, 0.5, 2 * np.pi)
    out["gate_anchor_M40"] = dict(omega=0.5, t=2 * np.pi, fidelity=F, distance=d)
    c = dict(wb=1.0, eps=0.5, wz=0.25, kb=0.1, nth=1.0, g=0.025)
    c["wm"] = c["wb"] - c["wz"]
    rates = cooling_rates(c)
    c["kz"] = rates["gamma_down"]
    gc = c["kz"] + rates["gamma_down"] - rates["gamma_up"]
    rates["n_ss"] = (c["kz"] * c["nth"] + rates["gamma_up"]) / gc
    rates["config"] = {k: v for k, v in c.items()}
    if "--skip-me" not in sys.argv:
        rates["n_me_Na12_Nb3"] = two_mode_me(c, 12, 3, 8 / gc, 0.05)
    out["cooling_desk"] = rates
    out["_seconds"] = time.time() - t0
    with open(__file__.replace("gen_oracles.py", "frozen.json"), "w") as f:
        json.dump(out, f, indent=2)


if __name__ == "__main__":
    main()

"""Radial boundary-value solves for each azimuthal mode and z-frequency.

Second order (modified Bessel):  u'' + u'/r - (n^2/r^2 + x^2) u = f
Fourth order (biharmonic):       the squared operator, x = |kappa|

Both are solved by exact Green's-function convolution, accelerated to O(N_r)
by prefix/suffix sweeping of per-panel partial integrals.  Bessel products
are evaluated in scaled form, K_n(xr) I_n(xs) = e^{-x(r-s)} k(xr) i(xs), so
only nonpositive exponentials appear in cross-panel transfers.

Two per-panel quadrature paths (chosen per (n, x, panel) by the total
log-variation of the scaled kernel across the panel):

* fast: Chebyshev antiderivative of the damped integrand (spec-accurate
  while n ln(b/a) <= 5 and n ln(b/a) + x w <= 25);
* segment-GL: per-node-interval Gauss-Legendre with direct kernel
  evaluation, exact local anchoring; used for the innermost panel (where
  K_n is log/power singular at s = 0), high azimuthal orders, and large x.

Derivatives come from differentiating the Bessel prefactors analytically,
never from differencing the numerical solution.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ive, kve

from . import _backend
from .grids import CylGrid

__all__ = ["RadialSolution", "solve_modified_bessel", "solve_fourth_order",
           "solve_modified_bessel_batch", "solve_fourth_order_batch",
           "spectral_integration_solve", "radiation_bc_residual"]

VAR_EXP_MAX = 25.0     # fast-path cap on n ln(b/a) + x w
VAR_ORDER_MAX = 5.0    # fast-path cap on n ln(b/a) alone


@dataclass
class RadialSolution:
    """One (n, kappa) solve: values and r-derivatives on the radial grid."""

    n: int
    kappa: float
    u: np.ndarray
    u_r: np.ndarray
    u_rr: np.ndarray
    u_rrr: np.ndarray | None = None
    backend: str = "green"


def _family(n, z, max_deriv):
    """Scaled I/K family on an array; rows with overflow are flagged invalid."""
    i0 = ive(n, z)
    k0 = kve(n, z)
    im = ive(abs(n - 1), z)
    ip = ive(n + 1, z)
    km = kve(abs(n - 1), z)
    kp = kve(n + 1, z)
    di = 0.5 * (im + ip)
    dk = -0.5 * (km + kp)
    fam = [i0, k0, di, dk]
    if max_deriv >= 2:
        c = 1.0 + (n * n) / (z * z)
        fam += [c * i0 - di / z, c * k0 - dk / z]
    if max_deriv >= 3:
        c = 1.0 + (n * n + 2.0) / (z * z)
        d = (z * z + 3.0 * n * n) / z ** 3
        fam += [c * di - d * i0, c * dk - d * k0]
    if max_deriv >= 4:
        d2i, d2k = fam[4], fam[5]
        d3i, d3k = fam[6], fam[7]
        c = 1.0 + (n * n + 2.0) / (z * z)
        b = (z * z + 5.0 * n * n + 4.0) / z ** 3
        e = (z * z + 9.0 * n * n) / z ** 4
        fam += [c * d2i - b * di + e * i0, c * d2k - b * dk + e * k0]
    valid = np.ones(z.shape[0], dtype=bool)
    for arr in fam:
        valid &= np.all(np.isfinite(arr), axis=1)
    for arr in fam:
        arr[~valid] = 0.0
    return fam, valid


def _fast_split(n, x, a, b):
    """Index i: x[:i] takes the fast path on panel [a, b], x[i:] segment-GL."""
    if a <= 0.0:
        return 0
    ovar = n * np.log(b / a)
    if ovar > VAR_ORDER_MAX:
        return 0
    return int(np.searchsorted(x, (VAR_EXP_MAX - ovar) / (b - a), side="right"))


def _sweep(n, x, x_of, rhs, grid: CylGrid, fourth: bool):
    """Batched prefix/suffix partial integrals for all needed kernels.

    x: unique damping rates, ascending; x_of: map rhs-row -> x-row;
    rhs: (K, N_r) complex.  Returns dict of partial-integral arrays.
    """
    P = grid.P
    r = grid.r_nodes
    K = rhs.shape[0]
    rr = r[None, :]
    z = np.outer(x, r)
    fam, valid = _family(n, z, 4 if fourth else 2)
    i0, k0, di, dk = fam[:4]

    # kernels: (name, side, node-values builder, GL builder)
    if fourth:
        specs = [("P1", +1, lambda sl: di[:, sl] * rr[:, sl] ** 2),
                 ("P2", +1, lambda sl: i0[:, sl] * rr[:, sl]),
                 ("S1", -1, lambda sl: dk[:, sl] * rr[:, sl] ** 2),
                 ("S2", -1, lambda sl: k0[:, sl] * rr[:, sl])]
    else:
        specs = [("P", +1, lambda sl: i0[:, sl] * rr[:, sl]),
                 ("S", -1, lambda sl: k0[:, sl] * rr[:, sl])]

    out = {name: np.zeros((K, len(r)), dtype=np.complex128) for name, _, _ in specs}
    carry = {name: np.zeros(K, dtype=np.complex128) for name, _, _ in specs}

    npan = len(grid.widths)
    panel_order = {+1: range(npan), -1: range(npan - 1, -1, -1)}
    splits = [_fast_split(n, x, grid.edges[p], grid.edges[p + 1])
              for p in range(npan)]
    # row index where the GL regime starts (rhs rows sorted by x_of ascending)
    row_splits = [int(np.searchsorted(x_of, s, side="left")) for s in splits]

    # precompute GL kernel values per panel (only where some x needs them)
    gl_cache = {}
    for p in range(npan):
        ix = splits[p]
        if ix >= len(x):
            continue
        a, b = grid.edges[p], grid.edges[p + 1]
        spts = a + (grid.seg_pts + 1) / 2 * (b - a)
        zg = np.einsum("k,st->kst", x[ix:], spts)
        ig = ive(n, zg)
        kg = kve(n, zg)
        entry = {"pts": spts,
                 "wts": grid.seg_wts * (b - a) / 2,
                 "edges": a + (grid.segE + 1) / 2 * (b - a)}
        if fourth:
            dig = 0.5 * (ive(abs(n - 1), zg) + ive(n + 1, zg))
            dkg = -0.5 * (kve(abs(n - 1), zg) + kve(n + 1, zg))
            entry["P1"] = dig * spts ** 2
            entry["P2"] = ig * spts
            entry["S1"] = dkg * spts ** 2
            entry["S2"] = kg * spts
        else:
            entry["P"] = ig * spts
            entry["S"] = kg * spts
        for key in tuple(entry):
            if key not in ("pts", "wts", "edges"):
                entry[key][~valid[ix:]] = 0.0
        gl_cache[p] = entry

    for name, side, node_vals in specs:
        acc = carry[name]
        res = out[name]
        for p in panel_order[side]:
            a, b = grid.edges[p], grid.edges[p + 1]
            w = b - a
            sl = grid.panel_slice(p)
            rp = r[sl]
            isplit, rsplit = splits[p], row_splits[p]
            if rsplit > 0:
                rows = slice(0, rsplit)
                ker = node_vals(sl)[x_of[rows]]
                loc, full = _backend.panel_fast(
                    side, x[x_of[rows]], ker, rhs[rows, sl], rp, a, b,
                    grid.part_int, grid.full_int)
            else:
                loc = full = None
            if rsplit < K:
                rows_g = slice(rsplit, K)
                entry = gl_cache[p]
                gker = entry[name][x_of[rows_g] - isplit]
                gdata = np.einsum("gs,ks->kg", grid.seg_interp,
                                  rhs[rows_g, sl]).reshape(
                                      K - rsplit, P + 1, grid.N_GL)
                locg, fullg = _backend.panel_gl(
                    side, x[x_of[rows_g]], gker, gdata,
                    entry["wts"], entry["pts"], entry["edges"])
            else:
                locg = fullg = None
            dl = np.exp(-np.outer(x[x_of], rp - a if side > 0 else b - rp))
            if loc is not None:
                res[:rsplit, sl] = loc + acc[:rsplit, None] * dl[:rsplit]
            if locg is not None:
                res[rsplit:, sl] = locg + acc[rsplit:, None] * dl[rsplit:]
            tr = np.exp(-x[x_of] * w)
            newfull = np.empty(K, dtype=np.complex128)
            if full is not None:
                newfull[:rsplit] = full
            if fullg is not None:
                newfull[rsplit:] = fullg
            acc = acc * tr + newfull
        carry[name] = acc

    return out, fam, valid


def _assemble_second(n, x, x_of, rhs, grid):
    parts, fam, valid = _sweep(n, x, x_of, rhs, grid, fourth=False)
    i0, k0, di, dk, d2i, d2k = fam[:6]
    G, S = parts["P"], parts["S"]
    ex = lambda A: A[x_of]
    xr = x[x_of][:, None]
    u = -(ex(k0) * G + ex(i0) * S)
    ur = -xr * (ex(dk) * G + ex(di) * S)
    urr = -xr ** 2 * (ex(d2k) * G + ex(d2i) * S) + rhs
    bad = ~valid[x_of]
    u[bad] = 0.0
    ur[bad] = 0.0
    urr[bad] = 0.0
    return u, ur, urr


def _assemble_fourth(n, x, x_of, rhs, grid):
    parts, fam, valid = _sweep(n, x, x_of, rhs, grid, fourth=True)
    i0, k0, di, dk, d2i, d2k, d3i, d3k, d4i, d4k = fam
    P1, P2, S1, S2 = parts["P1"], parts["P2"], parts["S1"], parts["S2"]
    ex = lambda A: A[x_of]
    xr = x[x_of][:, None]
    r = grid.r_nodes[None, :]
    c = -1.0 / (2.0 * xr)
    u = c * (ex(k0) * P1 + r * ex(dk) * P2 + ex(i0) * S1 + r * ex(di) * S2)
    ur = c * (xr * ex(dk) * P1 + (ex(dk) + xr * r * ex(d2k)) * P2
              + xr * ex(di) * S1 + (ex(di) + xr * r * ex(d2i)) * S2)
    urr = c * (xr ** 2 * ex(d2k) * P1
               + (2 * xr * ex(d2k) + xr ** 2 * r * ex(d3k)) * P2
               + xr ** 2 * ex(d2i) * S1
               + (2 * xr * ex(d2i) + xr ** 2 * r * ex(d3i)) * S2)
    urrr = c * (xr ** 3 * ex(d3k) * P1
                + (3 * xr ** 2 * ex(d3k) + xr ** 3 * r * ex(d4k)) * P2
                + xr ** 3 * ex(d3i) * S1
                + (3 * xr ** 2 * ex(d3i) + xr ** 3 * r * ex(d4i)) * S2)
    bad = ~valid[x_of]
    for arr in (u, ur, urr, urrr):
        arr[bad] = 0.0
    return u, ur, urr, urrr


def _prepare_batch(kappas, rhs):
    kappas = np.atleast_1d(np.asarray(kappas, dtype=float))
    if np.any(kappas == 0.0):
        raise ValueError("kappa = 0 is excluded (the quadrature rule avoids it)")
    rhs = np.atleast_2d(np.asarray(rhs, dtype=np.complex128))
    x = np.abs(kappas)
    order = np.argsort(x, kind="stable")
    xs = x[order]
    xu, inv = np.unique(xs, return_inverse=True)
    return rhs[order], xu, inv, order


def solve_modified_bessel_batch(n, kappas, rhs, grid: CylGrid):
    """Second-order solves for many kappa at once; rhs rows match kappas."""
    rhs_s, xu, x_of, order = _prepare_batch(kappas, rhs)
    u, ur, urr = _assemble_second(abs(int(n)), xu, x_of, rhs_s, grid)
    unorder = np.argsort(order, kind="stable")
    return u[unorder], ur[unorder], urr[unorder]


def solve_fourth_order_batch(n, kappas, rhs, grid: CylGrid):
    """Fourth-order solves for many kappa at once."""
    rhs_s, xu, x_of, order = _prepare_batch(kappas, rhs)
    u, ur, urr, urrr = _assemble_fourth(abs(int(n)), xu, x_of, rhs_s, grid)
    unorder = np.argsort(order, kind="stable")
    return u[unorder], ur[unorder], urr[unorder], urrr[unorder]


def _maybe_real(arrs, rhs):
    if np.isrealobj(rhs) or (np.iscomplexobj(rhs) and np.all(np.imag(rhs) == 0)):
        return [np.real(a) for a in arrs]
    return list(arrs)


def solve_modified_bessel(n, kappa, rhs, grid: CylGrid) -> RadialSolution:
    """Green's-function solve of the modified Bessel ODE for one (n, kappa)."""
    u, ur, urr = solve_modified_bessel_batch(n, [kappa], [rhs], grid)
    u, ur, urr = _maybe_real((u[0], ur[0], urr[0]), np.asarray(rhs))
    return RadialSolution(abs(int(n)), float(kappa), u, ur, urr, backend="green")


def solve_fourth_order(n, kappa, rhs, grid: CylGrid) -> RadialSolution:
    """Green's-function solve of the fourth-order (biharmonic) radial ODE."""
    u, ur, urr, urrr = solve_fourth_order_batch(n, [kappa], [rhs], grid)
    u, ur, urr, urrr = _maybe_real((u[0], ur[0], urr[0], urrr[0]),
                                   np.asarray(rhs))
    return RadialSolution(abs(int(n)), float(kappa), u, ur, urr, urrr,
                          backend="green")


# ---------------------------------------------------------------------------
# spectral-integration comparison backend (global Chebyshev, second order)
# ---------------------------------------------------------------------------

def _coeff_ops(N):
    """Coefficient-space operators on [-1,1]: multiply-by-(1+t), antiderivative."""
    import scipy.sparse as sp

    X = sp.lil_matrix((N + 4, N + 4))
    for k in range(N + 3):
        X[k, k] = 1.0          # identity part of (1 + t)
    X[1, 0] += 1.0             # t T_0 = T_1
    for k in range(1, N + 3):
        if k + 1 <= N + 3:
            X[k + 1, k] += 0.5
        X[k - 1, k] += 0.5
    S = sp.lil_matrix((N + 4, N + 4))
    S[1, 0] = 1.0
    S[2, 1] = 0.25
    S[0, 1] = 0.25             # constant fixed afterwards
    for k in range(2, N + 3):
        if k + 1 <= N + 3:
            S[k + 1, k] = 1.0 / (2 * (k + 1))
        S[k - 1, k] -= 1.0 / (2 * (k - 1))
    # enforce antiderivative(-1) = 0:  C_0 -= sum (-1)^k C_k
    sign = np.cos(np.pi * np.arange(N + 4))
    Z = sp.lil_matrix((N + 4, N + 4))
    Z[0, :] = sign[None, :]
    S = S - (Z @ S)
    return X.tocsr(), S.tocsr()


def spectral_integration_solve(n, kappa, rhs, grid: CylGrid) -> RadialSolution:
    """Global Chebyshev spectral-integration solve (comparison backend).

    Represents u'' as a Chebyshev series on [0, R] (single panel required),
    multiplies the ODE by r^2, and solves the banded-plus-bordered system
    with the radiation and origin conditions as dense rows.  Documented to
    lose accuracy on fine grids: the operator is singular at r = 0, so the
    underlying integral equation is not of the second kind.
    """
    import scipy.sparse as sp
    import scipy.sparse.linalg as spla

    if len(grid.widths) != 1:
        raise ValueError("spectral_integration backend requires a single panel")
    n = abs(int(n))
    x = abs(float(kappa))
    if x == 0.0:
        raise ValueError("kappa = 0 is excluded")
    N = grid.P
    R = grid.config.R
    c = R / 2.0
    X, S = _coeff_ops(N)
    M = N + 4
    Ik = sp.identity(M, format="csr")
    X2 = (X @ X).tocsr()
    SS = (S @ S).tocsr()

    fvals = np.asarray(rhs, dtype=np.complex128)
    fc = np.zeros(M, dtype=np.complex128)
    fc[:N] = grid.vals2coeffs @ fvals
    b_vec = (c * c) * (X2 @ fc)

    # unknowns: alpha_0..alpha_{N-1}, c1, c2
    A_alpha = (c * c) * (X2 @ Ik) + (c * c) * (X @ S) \
        - (n * n) * (c * c) * SS - (x * x) * (c ** 4) * (X2 @ SS)
    A_alpha = A_alpha.tolil()
    one_pt = np.zeros(M); one_pt[0] = 1.0          # coefficients of 1
    lin = np.zeros(M); lin[0] = 1.0; lin[1] = 1.0  # coefficients of (1+t)
    col_c1 = c * (X @ one_pt) - (n * n) * c * lin - (x * x) * (c ** 3) * (X2 @ lin)
    col_c2 = -(n * n) * one_pt - (x * x) * (c * c) * (X2 @ one_pt)

    nrow = N + 2
    A = sp.lil_matrix((nrow, nrow), dtype=np.complex128)
    A[:N, :N] = A_alpha[:N, :N]
    A[:N, N] = col_c1[:N, None]
    A[:N, N + 1] = col_c2[:N, None]
    rhs_sys = np.zeros(nrow, dtype=np.complex128)
    rhs_sys[:N] = b_vec[:N]

    # boundary rows
    kh = kve(n, x * R)
    dkh = -0.5 * (kve(abs(n - 1), x * R) + kve(n + 1, x * R))
    gamma = kh / (x * dkh)
    ones = np.ones(M)
    SS_sum = np.asarray(SS.T @ ones)[:N]      # evaluate SS alpha at t = 1
    S_sum = np.asarray(S.T @ ones)[:N]
    # row N: radiation  u(R) - gamma u'(R) = 0
    A[N, :N] = (c * c) * SS_sum - gamma * c * S_sum
    A[N, N] = 2 * c - gamma
    A[N, N + 1] = 1.0
    # row N+1: origin condition
    if n == 0:
        A[N + 1, N] = 1.0                      # u'(0) = c1 = 0
    else:
        A[N + 1, N + 1] = 1.0                  # u(0) = c2 = 0
    lu = spla.splu(A.tocsc())
    sol = lu.solve(rhs_sys)
    alpha = np.zeros(M, dtype=np.complex128)
    alpha[:N] = sol[:N]
    c1, c2 = sol[N], sol[N + 1]

    t = grid.t_ref
    Tev = np.cos(np.outer(np.arccos(np.clip(t, -1, 1)), np.arange(M)))
    u = c2 + c * c1 * (1 + t) + (c * c) * (Tev @ (S @ (S @ alpha)))
    ur = c1 + c * (Tev @ (S @ alpha))
    urr = Tev @ alpha
    u, ur, urr = _maybe_real((u, ur, urr), np.asarray(rhs))
    return RadialSolution(n, float(kappa), u, ur, urr,
                          backend="spectral_integration")


def radiation_bc_residual(sol: RadialSolution, grid: CylGrid) -> float:
    """Normalized residual of u(R) - K_n/(x K_n') u'(R) = 0."""
    R = grid.config.R
    x = abs(sol.kappa)
    kh = kve(sol.n, x * R)
    dkh = -0.5 * (kve(abs(sol.n - 1), x * R) + kve(sol.n + 1, x * R))
    gamma = kh / (x * dkh)
    row = grid.interp_rows([R])
    uR = complex(row @ sol.u)
    urR = complex(row @ sol.u_r)
    norm = float(np.max(np.abs(sol.u)))
    if norm == 0.0:
        return 0.0
    return abs(uR - gamma * urR) / norm

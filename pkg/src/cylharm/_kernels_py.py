"""Pure-numpy sweep primitives (fallback backend).

Both backends expose the same two panel-level primitives; ``cylharm._backend``
picks the compiled twin when available.  Every exponential carries a
nonpositive argument except the single re-anchoring division in the fast
path, whose exponent is capped by the caller's path-selection rule.

side = +1: prefix integrals  int_a^{r_i} e^{-x (r_i - s)} g(s) ds
side = -1: suffix integrals  int_{r_i}^{b} e^{-x (s - r_i)} g(s) ds

with g = kernel * data; the second return value is the panel total damped to
the far edge (right edge for prefix, left for suffix) for cross-panel carries.
"""
from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def panel_fast(side, x, ker, data, rp, a, b, part_int, full_int):
    """Chebyshev-antiderivative path.

    x: (K,) damping rates; ker: (K, P) kernel values at the panel nodes;
    data: (K, P) right-hand-side values there; rp: (P,) node radii.
    Returns (loc (K, P), full (K,)).
    """
    w = b - a
    if side > 0:
        damp = np.exp(-np.outer(x, b - rp))
    else:
        damp = np.exp(-np.outer(x, rp - a))
    psi = damp * ker * data
    part = (w / 2) * (psi @ part_int.T)
    full = (w / 2) * (psi @ full_int)
    if side > 0:
        loc = part / damp
    else:
        loc = (full[:, None] - part) / damp
    return loc, full


def panel_gl(side, x, gker, gdata, seg_wts, seg_pts, seg_edges):
    """Segment Gauss-Legendre path (direct kernel evaluation).

    gker/gdata: (K, P+1, n_gl) kernel and right-hand-side values at the GL
    points; seg_pts/seg_wts: (P+1, n_gl) GL points and weights in r;
    seg_edges: (P+2,) segment edges a, r_0..r_{P-1}, b.  Per-segment
    anchoring keeps all exponents nonpositive for any x.
    Returns (loc (K, P), full (K,)).
    """
    K = len(x)
    nseg = gker.shape[1]
    P = nseg - 1
    dE = np.diff(seg_edges)
    dtype = np.result_type(gdata, gker)
    loc = np.empty((K, P), dtype=dtype)
    g = gker * gdata
    if side > 0:
        delta = seg_edges[1:, None] - seg_pts            # anchor right
    else:
        delta = seg_pts - seg_edges[:-1, None]           # anchor left
    Ij = np.sum(seg_wts[None] * np.exp(-x[:, None, None] * delta[None]) * g,
                axis=2)
    acc = np.zeros(K, dtype=dtype)
    if side > 0:
        for j in range(nseg):
            acc = acc * np.exp(-x * dE[j]) + Ij[:, j]
            if j < P:
                loc[:, j] = acc
    else:
        for j in range(nseg - 1, -1, -1):
            acc = acc * np.exp(-x * dE[j]) + Ij[:, j]
            if j >= 1:
                loc[:, j - 1] = acc
    return loc, acc

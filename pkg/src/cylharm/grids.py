"""Tensor-product grid: panel-Chebyshev in r, uniform in theta and z.

Radial panels carry first-kind (open) Chebyshev nodes, so r = 0 is never a
sample point and the 1/r, 1/r^2 coefficients of the cylindrical operators
stay finite.  The per-panel calculus (interpolation, differentiation,
indefinite integration) is precomputed once as dense P x P operators on the
reference interval [-1, 1] and rescaled per panel.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = ["SolverConfig", "CylGrid", "build_grid", "cheb_interp_eval",
           "panel_antiderivative"]


@dataclass(frozen=True)
class SolverConfig:
    """Discretization parameters for the cylindrical solvers.

    ``panel_edges`` defaults to a uniform split of [0, R] into ``n_panels``
    intervals; pass explicit edges for radial adaptivity.
    """

    R: float
    A: float
    n_panels: int
    cheb_order: int
    n_theta: int
    n_z: int
    eta: int = 4
    quad_order: int = 10
    tol: float = 1e-11
    panel_edges: tuple = None
    deriv_cap: int = 3   # max theta/z derivative order accepted

    def __post_init__(self):
        if self.R <= 0 or self.A <= 0:
            raise ValueError("R and A must be positive")
        if self.cheb_order < 2:
            raise ValueError("cheb_order must be >= 2")
        if self.n_z % 2 != 0:
            raise ValueError("n_z must be even")
        if self.n_theta < 1:
            raise ValueError("n_theta must be >= 1")
        if not 2 <= self.quad_order <= 16:
            raise ValueError("quad_order must be in 2..16")
        if self.eta < 1:
            raise ValueError("eta must be >= 1")
        if self.eta < 2:
            warnings.warn("eta < 2 only converges near z = 0; "
                          "eta >= 2 is required for full-range accuracy")
        if self.panel_edges is None:
            edges = tuple(np.linspace(0.0, self.R, self.n_panels + 1))
            object.__setattr__(self, "panel_edges", edges)
        edges = np.asarray(self.panel_edges, dtype=float)
        if len(edges) != self.n_panels + 1:
            raise ValueError("panel_edges must have n_panels + 1 entries")
        if edges[0] != 0.0 or abs(edges[-1] - self.R) > 1e-12 * self.R:
            raise ValueError("panel_edges must start at 0 and end at R")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("panel_edges must be strictly increasing")
        if self.eta * self.n_z <= 2 * self.quad_order:
            raise ValueError("eta * n_z must exceed 2 * quad_order")

    @property
    def n_r(self) -> int:
        return self.n_panels * self.cheb_order

    @property
    def n_z_pad(self) -> int:
        return self.eta * self.n_z

    @property
    def A_pad(self) -> float:
        return self.eta * self.A


def _ref_nodes(P):
    """First-kind Chebyshev nodes on [-1, 1], increasing."""
    j = np.arange(P)
    return -np.cos((2 * j + 1) * np.pi / (2 * P))


def _vals_to_coeffs(P):
    t = _ref_nodes(P)
    T = np.cos(np.outer(np.arange(P), np.arccos(t)))
    V = (2.0 / P) * T
    V[0] *= 0.5
    return V


def _antider_coeffs(P):
    """Coefficient-space antiderivative: P coeffs -> P+1 coeffs (constant free)."""
    A = np.zeros((P + 1, P))
    A[1, 0] = 1.0
    if P > 1:
        A[2, 1] = 0.25
    for k in range(2, P):
        A[k + 1, k] = 1.0 / (2 * (k + 1))
        A[k - 1, k] -= 1.0 / (2 * (k - 1))
    return A


def _deriv_coeffs(P):
    """Coefficient-space differentiation on [-1, 1]."""
    D = np.zeros((P, P))
    for k in range(1, P):
        for j in range(k - 1, -1, -2):
            D[j, k] = 2.0 * k if j > 0 else float(k)
    return D


def _cheb_eval_matrix(targets, n_coeff):
    """Evaluate T_0..T_{n_coeff-1} at targets in [-1, 1]."""
    targets = np.clip(np.asarray(targets, dtype=float), -1.0, 1.0)
    return np.cos(np.outer(np.arccos(targets), np.arange(n_coeff)))


def _bary_weights(t):
    P = len(t)
    w = np.empty(P)
    for j in range(P):
        w[j] = 1.0 / np.prod(t[j] - np.delete(t, j))
    return w


def _interp_matrix(t, targets):
    """Barycentric interpolation matrix from nodes t to arbitrary targets."""
    w = _bary_weights(t)
    M = np.zeros((len(targets), len(t)))
    for i, x in enumerate(targets):
        d = x - t
        hit = np.nonzero(d == 0.0)[0]
        if hit.size:
            M[i, hit[0]] = 1.0
        else:
            c = w / d
            M[i] = c / np.sum(c)
    return M


def _segment_gl(t, n_gl):
    """GL points/weights on the P+1 segments of [-1,1] cut at the nodes t."""
    tg, wg = np.polynomial.legendre.leggauss(n_gl)
    E = np.concatenate([[-1.0], t, [1.0]])
    dE = np.diff(E)
    pts = E[:-1, None] + dE[:, None] * (tg[None, :] + 1) / 2
    wts = dE[:, None] * wg[None, :] / 2
    return E, pts, wts


class CylGrid:
    """Immutable tensor-product grid plus per-panel Chebyshev calculus.

    Attributes of note:

    - ``r_nodes``: all N_r radial nodes, increasing, strictly inside (0, R)
    - ``theta_nodes``: N_theta equispaced on [0, 2pi)
    - ``z_nodes``: z_l = l * h_z for l = -N_z/2 .. N_z/2 - 1
    - reference operators (``vals2coeffs``, ``part_int``, ``full_int``,
      ``deriv_mat``) on [-1, 1]; panel versions are affine rescalings
    """

    N_GL = 24

    def __init__(self, config: SolverConfig):
        self.config = config
        P = config.cheb_order
        self.P = P
        self.edges = np.asarray(config.panel_edges, dtype=float)
        self.widths = np.diff(self.edges)
        self.t_ref = _ref_nodes(P)
        self.r_nodes = np.concatenate(
            [a + (b - a) * (self.t_ref + 1) / 2
             for a, b in zip(self.edges[:-1], self.edges[1:])])
        self.theta_nodes = 2 * np.pi * np.arange(config.n_theta) / config.n_theta
        self.h_z = 2.0 * config.A / config.n_z
        self.z_index = np.arange(-config.n_z // 2, config.n_z // 2)
        self.z_nodes = self.z_index * self.h_z

        # reference calculus on [-1, 1]
        V = _vals_to_coeffs(P)
        A = _antider_coeffs(P)
        Tn = _cheb_eval_matrix(self.t_ref, P + 1)
        Tm1 = np.cos(np.pi * np.arange(P + 1))          # T_k(-1)
        Tp1 = np.ones(P + 1)                            # T_k(+1)
        AV = A @ V
        self.vals2coeffs = V
        self.antider = A
        self.part_int = (Tn - Tm1[None, :]) @ AV        # values -> int_{-1}^{t_i}
        self.full_int = (Tp1 - Tm1) @ AV                # values -> int_{-1}^{1}
        self.deriv_mat = _cheb_eval_matrix(self.t_ref, P) @ (_deriv_coeffs(P) @ V)
        self.bary_w = _bary_weights(self.t_ref)

        # segment-GL tables for the slow (direct-evaluation) radial path
        self.segE, self.seg_pts, self.seg_wts = _segment_gl(self.t_ref, self.N_GL)
        self.seg_interp = _interp_matrix(self.t_ref, self.seg_pts.ravel())

        # radial quadrature weights (per node, measure dr)
        self.r_weights = np.concatenate(
            [(w / 2) * self.full_int for w in self.widths])

    # ---- panel helpers -------------------------------------------------

    def panel_slice(self, p):
        P = self.P
        return slice(p * P, (p + 1) * P)

    def panel_of(self, r):
        p = int(np.searchsorted(self.edges, r, side="right") - 1)
        return min(max(p, 0), len(self.widths) - 1)

    def to_ref(self, p, r):
        a, b = self.edges[p], self.edges[p + 1]
        return 2.0 * (np.asarray(r) - a) / (b - a) - 1.0

    def interp_rows(self, targets):
        """Interpolation matrix from the full radial grid to arbitrary radii."""
        targets = np.atleast_1d(np.asarray(targets, dtype=float))
        M = np.zeros((len(targets), len(self.r_nodes)))
        for i, r in enumerate(targets):
            p = self.panel_of(r)
            M[i, self.panel_slice(p)] = _interp_matrix(
                self.t_ref, [self.to_ref(p, r)])[0]
        return M

    def radial_derivative(self, values, order=1):
        """Spectral d/dr along axis 0 of panelwise data (N_r, ...)."""
        out = np.array(values, copy=True)
        for _ in range(order):
            new = np.empty_like(out)
            for p in range(len(self.widths)):
                sl = self.panel_slice(p)
                new[sl] = (2.0 / self.widths[p]) * np.tensordot(
                    self.deriv_mat, out[sl], axes=(1, 0))
            out = new
        return out

    def radial_integral(self, values):
        """int_0^R values(r) dr via the panel quadrature weights."""
        return np.tensordot(self.r_weights, np.asarray(values), axes=(0, 0))


def build_grid(config: SolverConfig) -> CylGrid:
    """Construct the grid and all panel operators for ``config``."""
    return CylGrid(config)


def cheb_interp_eval(panel_values, a, b, target):
    """Evaluate the Chebyshev interpolant of per-panel samples at ``target``.

    ``panel_values`` are samples at the first-kind nodes of [a, b]; raises
    if the target lies outside the closed panel.
    """
    panel_values = np.asarray(panel_values, dtype=float)
    P = len(panel_values)
    if not (a <= target <= b):
        raise ValueError("target outside panel")
    t = 2.0 * (target - a) / (b - a) - 1.0
    c = _vals_to_coeffs(P) @ panel_values
    return float(_cheb_eval_matrix([t], P) @ c)


def panel_antiderivative(panel_values, a, b):
    """Chebyshev coefficients (on [a, b]) of F with F' = interpolant, F(a) = 0."""
    panel_values = np.asarray(panel_values, dtype=float)
    P = len(panel_values)
    C = ((b - a) / 2.0) * (_antider_coeffs(P) @ (_vals_to_coeffs(P) @ panel_values))
    Tm1 = np.cos(np.pi * np.arange(P + 1))
    C[0] -= Tm1 @ C
    return C

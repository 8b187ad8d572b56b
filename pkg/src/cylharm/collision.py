"""Axisymmetric Coulomb collision operator via Rosenbluth potentials.

H_b solves  Delta H = -4 pi f_b  (Poisson), G_b solves  Delta^2 G = -8 pi f_b
(biharmonic); the operator is assembled pointwise from spectral derivatives
of f_a and the potential-derivative bundles:

    C_p = -4 pi f_a f_b + f_a_r H_r + f_a_z H_z
    C_b = -8 pi f_a f_b
          + f_a_r [2 G_rzz + 2 G_rrr + (2/r) G_rr - (1/r^2) G_r]
          + f_a_z [(2/r) G_rz + 2 G_rrz + 2 G_zzz]
          + f_a_rr G_rr + 2 f_a_rz G_rz + f_a_zz G_zz
    C   = (gamma_ab / m_a) [C_b - 2 (1 + m_a/m_b) C_p]

All 1/r coefficients are finite because the radial nodes are open.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elliptic import DerivativeRequest, SolutionBundle, solve_biharmonic, solve_poisson
from .grids import CylGrid, SolverConfig, build_grid

__all__ = ["CollisionParams", "CollisionResult", "rosenbluth_H",
           "rosenbluth_G", "collision_axisymmetric"]

_H_DERIVS = ((0, 0, 0), (1, 0, 0), (0, 0, 1))
_G_DERIVS = ((1, 0, 0), (2, 0, 0), (1, 0, 1), (0, 0, 2),
             (3, 0, 0), (2, 0, 1), (1, 0, 2), (0, 0, 3))


@dataclass(frozen=True)
class CollisionParams:
    """Collision prefactor and species masses (consistent arbitrary units)."""

    gamma_ab: float = 1.0
    m_a: float = 1.0
    m_b: float = 1.0

    def __post_init__(self):
        if self.m_a <= 0 or self.m_b <= 0:
            raise ValueError("species masses must be positive")


@dataclass
class CollisionResult:
    """Collision operator and its two contributions on the (r, z) grid."""

    C: np.ndarray
    C_p: np.ndarray
    C_b: np.ndarray
    H_bundle: SolutionBundle
    G_bundle: SolutionBundle


def rosenbluth_H(f_b, config: SolverConfig,
                 grid: CylGrid | None = None) -> SolutionBundle:
    """First Rosenbluth potential: solve Delta H = -4 pi f_b with H, H_r, H_z."""
    return solve_poisson(-4 * np.pi * np.asarray(f_b, float),
                         DerivativeRequest(_H_DERIVS + ()), config, grid=grid)


def rosenbluth_G(f_b, config: SolverConfig,
                 grid: CylGrid | None = None) -> SolutionBundle:
    """Second Rosenbluth potential: Delta^2 G = -8 pi f_b with the derivative set
    consumed by the collision assembly (all (r,z) partials of orders 1..3)."""
    return solve_biharmonic(-8 * np.pi * np.asarray(f_b, float),
                            DerivativeRequest(_G_DERIVS), config, grid=grid)


def _axisymmetric_or_raise(f, tol):
    f = np.asarray(f, dtype=float)
    if f.ndim == 2:
        f = f[:, None, :]
    if f.shape[1] > 1:
        spread = np.max(np.abs(f - f.mean(axis=1, keepdims=True)))
        peak = max(np.max(np.abs(f)), 1e-300)
        if spread > tol * peak:
            raise ValueError("collision operator is defined for axisymmetric "
                             f"inputs; theta variation {spread/peak:.2e}")
        f = f.mean(axis=1, keepdims=True)
    return f


def _f_derivatives(f, grid: CylGrid):
    """Spectral (r, z) derivatives of gridded data: panel-Chebyshev in r,
    oversampled Fourier in z."""
    cfg = grid.config
    fr = grid.radial_derivative(f)
    frr = grid.radial_derivative(fr)
    nzp = cfg.n_z_pad
    idx = np.where(grid.z_index >= 0, grid.z_index, grid.z_index + nzp)
    pad = np.zeros(f.shape[:-1] + (nzp,))
    pad[..., idx] = f
    kap = 2 * np.pi * np.fft.rfftfreq(nzp, d=grid.h_z)
    F = np.fft.rfft(pad, axis=-1)
    fz = np.fft.irfft(F * (1j * kap), n=nzp, axis=-1)[..., idx]
    fzz = np.fft.irfft(F * -(kap ** 2), n=nzp, axis=-1)[..., idx]
    frz = grid.radial_derivative(fz)
    return fr, fz, frr, frz, fzz


def collision_axisymmetric(f_a, f_b, params: CollisionParams,
                           config: SolverConfig,
                           grid: CylGrid | None = None) -> CollisionResult:
    """Evaluate C(f_a, f_b) for axisymmetric gridded distributions.

    Inputs may be (N_r, N_z) or (N_r, N_theta, N_z) with negligible theta
    variation (rejected above ``config.tol`` otherwise).  Returns fields on
    the (r, z) grid.
    """
    if grid is None:
        grid = build_grid(config)
    fa = _axisymmetric_or_raise(f_a, config.tol)
    fb = _axisymmetric_or_raise(f_b, config.tol)
    if config.n_theta != 1:
        config_ax = SolverConfig(
            R=config.R, A=config.A, n_panels=config.n_panels,
            cheb_order=config.cheb_order, n_theta=1, n_z=config.n_z,
            eta=config.eta, quad_order=config.quad_order, tol=config.tol,
            panel_edges=config.panel_edges)
        grid = build_grid(config_ax)
    else:
        config_ax = config

    Hb = rosenbluth_H(fb, config_ax, grid)
    Gb = rosenbluth_G(fb, config_ax, grid)

    fa2 = fa[:, 0, :]
    fb2 = fb[:, 0, :]
    fr, fz, frr, frz, fzz = _f_derivatives(fa2, grid)
    r = grid.r_nodes[:, None]

    H_r = Hb[(1, 0, 0)][:, 0, :]
    H_z = Hb[(0, 0, 1)][:, 0, :]
    G_r = Gb[(1, 0, 0)][:, 0, :]
    G_rr = Gb[(2, 0, 0)][:, 0, :]
    G_rz = Gb[(1, 0, 1)][:, 0, :]
    G_zz = Gb[(0, 0, 2)][:, 0, :]
    G_rrr = Gb[(3, 0, 0)][:, 0, :]
    G_rrz = Gb[(2, 0, 1)][:, 0, :]
    G_rzz = Gb[(1, 0, 2)][:, 0, :]
    G_zzz = Gb[(0, 0, 3)][:, 0, :]

    C_p = -4 * np.pi * fa2 * fb2 + fr * H_r + fz * H_z
    C_b = (-8 * np.pi * fa2 * fb2
           + fr * (2 * G_rzz + 2 * G_rrr + (2 / r) * G_rr - G_r / r ** 2)
           + fz * ((2 / r) * G_rz + 2 * G_rrz + 2 * G_zzz)
           + frr * G_rr + 2 * frz * G_rz + fzz * G_zz)
    C = (params.gamma_ab / params.m_a) * (
        C_b - 2 * (1 + params.m_a / params.m_b) * C_p)
    return CollisionResult(C, C_p, C_b, Hb, Gb)

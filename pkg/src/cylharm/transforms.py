"""Angular mode analysis/synthesis and the oversampled z transforms.

theta: plain FFT mode decomposition, f^(n) = (2 pi / N_theta) sum_l e^{-i n theta_l} f_l,
synthesized back with the 1/(2 pi) Fourier-series convention (round trip is
the identity).

z: the data is compactly supported in [-A, A] and zero-padded to
[-A', A'] = eta * [-A, A], so the trapezoidal transform is spectrally
accurate and delivers the continuous transform on the lattice
kappa_k = k pi / A'.  Values at the singular-rule correction nodes are
direct O(N_z m) sums.  The inverse applies the hybrid rule: inverse FFT for
the lattice part, direct summation for the corrections; z-derivatives
multiply the integrand by (i kappa)^order before quadrature.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import CylGrid
from .singquad import SingularRule

__all__ = ["ModeField", "SpectralModeField", "theta_decompose",
           "theta_synthesize", "z_forward", "z_inverse_singular"]


@dataclass
class ModeField:
    """Samples of one azimuthal mode on the (r, z) grid (z ascending)."""

    n: int
    values: np.ndarray          # (N_r, N_z) complex
    grid: CylGrid


@dataclass
class SpectralModeField:
    """z-transform of one mode at every node of the singular rule.

    ``reg_values`` holds the full padded FFT lattice in FFT index order
    (k = 0..N'/2-1, -N'/2..-1); only entries with |k| >= m participate in
    the rule.  ``cor_values`` are the correction-node samples.
    """

    n: int
    reg_values: np.ndarray      # (N_r, N_z')
    cor_values: np.ndarray      # (N_r, n_corr)
    rule: SingularRule
    grid: CylGrid

    def at_nodes(self, kappas) -> np.ndarray:
        """Values at arbitrary rule nodes (regular lattice or correction)."""
        kappas = np.atleast_1d(kappas)
        out = np.empty((self.reg_values.shape[0], len(kappas)),
                       dtype=np.complex128)
        h = self.rule.h
        nzp = self.rule.n_z_prime
        for i, k in enumerate(kappas):
            j = int(np.rint(k / h))
            if abs(j * h - k) < 1e-12 * max(h, abs(k)):
                out[:, i] = self.reg_values[:, j % nzp]
            else:
                c = np.argmin(np.abs(self.rule.correction_nodes - k))
                if abs(self.rule.correction_nodes[c] - k) > 1e-12:
                    raise ValueError(f"{k} is not a rule node")
                out[:, i] = self.cor_values[:, c]
        return out


def theta_decompose(samples) -> list[ModeField] | np.ndarray:
    """FFT mode analysis over the theta axis of (r, theta, z) samples.

    Returns the (N_r, N_theta, N_z) complex array of modes in signed order
    n = -N_theta/2 .. N_theta/2 - 1 along axis 1.
    """
    samples = np.asarray(samples)
    n_theta = samples.shape[1]
    modes = (2 * np.pi / n_theta) * np.fft.fft(samples, axis=1)
    return np.fft.fftshift(modes, axes=1) if n_theta > 1 else modes


def theta_synthesize(modes, deriv_order: int = 0) -> np.ndarray:
    """Fourier-series synthesis u = (1/2pi) sum_n modes_n (i n)^b e^{i n theta}.

    ``modes`` has signed mode order along axis 1 (as from theta_decompose).
    """
    modes = np.asarray(modes, dtype=np.complex128)
    n_theta = modes.shape[1]
    if n_theta > 1:
        modes = np.fft.ifftshift(modes, axes=1)
    if deriv_order:
        n_signed = np.fft.fftfreq(n_theta, 1.0 / n_theta)
        if deriv_order % 2 == 1:
            n_signed = n_signed.copy()
            n_signed[n_theta // 2 if n_theta > 1 else 0] = 0.0  # odd-order Nyquist
        fac = (1j * n_signed) ** deriv_order
        modes = modes * fac[None, :, None]
    return (n_theta / (2 * np.pi)) * np.fft.ifft(modes, axis=1)


def _pad_layout(grid: CylGrid):
    """Index map of original z samples inside the padded FFT array."""
    n_z = grid.config.n_z
    n_zp = grid.config.n_z_pad
    idx = np.where(grid.z_index >= 0, grid.z_index, grid.z_index + n_zp)
    return n_z, n_zp, idx


def z_forward(mode: ModeField, rule: SingularRule) -> SpectralModeField:
    """Forward z transform at all rule nodes (padded FFT + direct sums)."""
    grid = mode.grid
    n_z, n_zp, idx = _pad_layout(grid)
    vals = np.asarray(mode.values, dtype=np.complex128)
    padded = np.zeros((vals.shape[0], n_zp), dtype=np.complex128)
    padded[:, idx] = vals
    reg = grid.h_z * np.fft.fft(padded, axis=1)
    phase = np.exp(-1j * np.outer(rule.correction_nodes, grid.z_nodes))
    cor = grid.h_z * (vals @ phase.T)
    return SpectralModeField(mode.n, reg, cor, rule, grid)


def z_inverse_singular(spectral: SpectralModeField,
                       z_deriv_order: int = 0) -> ModeField:
    """Inverse transform via the singular rule, restricted to [-A, A).

    The integrand is premultiplied by (i kappa)^order; lattice entries with
    |k| < m never enter (they are covered by the correction nodes).
    """
    rule, grid = spectral.rule, spectral.grid
    n_z, n_zp, idx = _pad_layout(grid)
    k_fft = np.fft.fftfreq(n_zp, 1.0 / n_zp)
    kappa = k_fft * rule.h
    keep = np.abs(k_fft) >= rule.order
    fac = np.where(keep, (1j * kappa) ** z_deriv_order if z_deriv_order
                   else 1.0, 0.0)
    work = spectral.reg_values * fac[None, :]
    u_pad = np.fft.ifft(work, axis=1) / grid.h_z
    u = u_pad[:, idx]

    wk = rule.correction_weights.astype(np.complex128)
    if z_deriv_order:
        wk = wk * (1j * rule.correction_nodes) ** z_deriv_order
    phase = np.exp(1j * np.outer(grid.z_nodes, rule.correction_nodes))
    u = u + (spectral.cor_values * wk[None, :]) @ phase.T / (2 * np.pi)
    return ModeField(spectral.n, u, grid)

"""Free-space Poisson and biharmonic solvers on the cylindrical grid.

Pipeline (per azimuthal mode, real input specialization):

1. rfft mode analysis in theta,
2. oversampled z transform at every node of the singular kappa rule,
3. batched radial Green's-function solves for all (n, kappa),
4. singular-rule inverse z transform with (i kappa)^c derivative factors,
5. inverse-rfft synthesis in theta with (i n)^b factors.

Any combination d^a_r d^b_theta d^c_z with a <= 2 (Poisson) or a <= 3
(biharmonic) comes out of the same solve set.
"""
from __future__ import annotations

import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .grids import CylGrid, SolverConfig, build_grid
from .radial import solve_fourth_order_batch, solve_modified_bessel_batch
from .singquad import build_singular_rule
from .transforms import ModeField, SpectralModeField, z_forward, z_inverse_singular

__all__ = ["DerivativeRequest", "SolutionBundle", "solve_poisson",
           "solve_biharmonic", "spectral_decay_report"]


@dataclass(frozen=True)
class DerivativeRequest:
    """Requested derivative triples (a, b, c) = (r, theta, z) orders."""

    derivs: tuple

    def __init__(self, derivs=((0, 0, 0),)):
        object.__setattr__(self, "derivs", tuple(tuple(map(int, d))
                                                 for d in derivs))

    def validate(self, max_r_order: int, cap: int):
        for a, b, c in self.derivs:
            if a < 0 or b < 0 or c < 0:
                raise ValueError("derivative orders must be nonnegative")
            if a > max_r_order:
                raise ValueError(f"r-derivative order {a} unsupported "
                                 f"(max {max_r_order})")
            if b > cap or c > cap:
                raise ValueError(f"theta/z derivative order exceeds cap {cap}")


@dataclass
class SolutionBundle:
    """Solved field and requested derivatives, all on the (r, theta, z) grid."""

    data: dict
    config: SolverConfig
    grid: CylGrid
    timings: dict = field(default_factory=dict)
    quality: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.data[tuple(key)]

    def __contains__(self, key):
        return tuple(key) in self.data


def _num_workers():
    val = os.environ.get("CYLHARM_THREADS", "1")
    try:
        return max(1, int(val))
    except ValueError:
        return 1


def _check_support(f, config):
    peak = np.max(np.abs(f))
    if peak == 0.0:
        return
    edge = max(np.max(np.abs(f[-1])), np.max(np.abs(f[:, :, 0])),
               np.max(np.abs(f[:, :, -1])))
    if edge > config.tol * peak:
        warnings.warn(
            f"source not compactly supported inside the grid "
            f"(boundary/interior ratio {edge / peak:.2e} exceeds tol); "
            "the radiation condition assumes f = 0 outside", stacklevel=3)


def _solve(f, req: DerivativeRequest, config: SolverConfig, fourth: bool,
           grid: CylGrid | None, backend: str = "green"):
    t0 = time.perf_counter()
    f = np.asarray(f, dtype=np.float64)
    if grid is None:
        grid = build_grid(config)
    expect = (config.n_r, config.n_theta, config.n_z)
    if f.shape != expect:
        raise ValueError(f"field shape {f.shape} does not match grid {expect}")
    max_a = 3 if fourth else 2
    req.validate(max_a, config.deriv_cap)
    _check_support(f, config)

    rule = build_singular_rule(config.n_z_pad, config.A_pad, config.quad_order)
    n_half = config.n_theta // 2
    timings = {}

    t1 = time.perf_counter()
    modes = (2 * np.pi / config.n_theta) * np.fft.rfft(f, axis=1)
    timings["theta_decompose"] = time.perf_counter() - t1

    k_fft = np.fft.fftfreq(config.n_z_pad, 1.0 / config.n_z_pad)
    reg_cols = np.nonzero(np.abs(k_fft) >= rule.order)[0]
    kappas = np.concatenate([k_fft[reg_cols] * rule.h, rule.correction_nodes])
    n_reg = len(reg_cols)

    a_orders = sorted({a for a, _, _ in req.derivs})
    ac_pairs = sorted({(a, c) for a, _, c in req.derivs})
    planes = {ac: np.empty((config.n_r, n_half + 1, config.n_z),
                           dtype=np.complex128) for ac in ac_pairs}
    tees = {"z_forward": 0.0, "radial_solve": 0.0, "z_inverse": 0.0}

    solve_batch = solve_fourth_order_batch if fourth else solve_modified_bessel_batch

    def run_mode(n):
        ta = time.perf_counter()
        mf = ModeField(n, modes[:, n, :], grid)
        spec = z_forward(mf, rule)
        tb = time.perf_counter()
        rhs = np.concatenate([spec.reg_values[:, reg_cols],
                              spec.cor_values], axis=1).T
        if backend == "green":
            sols = solve_batch(n, kappas, rhs, grid)
        else:
            sols = _spectral_backend_batch(n, kappas, rhs, grid)
        tc = time.perf_counter()
        for a, c in ac_pairs:
            ua = sols[a].T
            sp = SpectralModeField(n, np.zeros_like(spec.reg_values),
                                   np.ascontiguousarray(ua[:, n_reg:]),
                                   rule, grid)
            sp.reg_values[:, reg_cols] = ua[:, :n_reg]
            planes[(a, c)][:, n, :] = z_inverse_singular(sp, c).values
        td = time.perf_counter()
        return tb - ta, tc - tb, td - tc

    workers = _num_workers()
    t1 = time.perf_counter()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(run_mode, range(n_half + 1)))
    else:
        stats = [run_mode(n) for n in range(n_half + 1)]
    for s in stats:
        tees["z_forward"] += s[0]
        tees["radial_solve"] += s[1]
        tees["z_inverse"] += s[2]
    timings.update(tees)
    timings["mode_loop"] = time.perf_counter() - t1

    t1 = time.perf_counter()
    data = {}
    n_signed = np.arange(n_half + 1, dtype=float)
    for a, b, c in req.derivs:
        plane = planes[(a, c)]
        if b:
            fac = (1j * n_signed) ** b
            if config.n_theta % 2 == 0 and b % 2 == 1 and config.n_theta > 1:
                fac = fac.copy()
                fac[-1] = 0.0      # Nyquist mode has no odd derivative
            plane = plane * fac[None, :, None]
        data[(a, b, c)] = (config.n_theta / (2 * np.pi)) * np.fft.irfft(
            plane, n=config.n_theta, axis=1)
    timings["theta_synthesize"] = time.perf_counter() - t1
    timings["total"] = time.perf_counter() - t0
    timings["n_modes"] = n_half + 1
    timings["n_kappa"] = len(kappas)

    quality = {}
    if fourth:
        for key in data:
            if sum(key) < 2:
                quality[key] = "reduced-accuracy (potential/first derivative " \
                               "of the biharmonic field)"
    return SolutionBundle(data, config, grid, timings, quality)


def _spectral_backend_batch(n, kappas, rhs, grid):
    from .radial import spectral_integration_solve
    U = np.empty((len(kappas), grid.config.n_r), dtype=np.complex128)
    Ur = np.empty_like(U)
    Urr = np.empty_like(U)
    for i, kap in enumerate(kappas):
        sol = spectral_integration_solve(n, kap, rhs[i], grid)
        U[i], Ur[i], Urr[i] = sol.u, sol.u_r, sol.u_rr
    return U, Ur, Urr


def solve_poisson(f, req: DerivativeRequest, config: SolverConfig,
                  grid: CylGrid | None = None,
                  backend: str = "green") -> SolutionBundle:
    """Free-space Poisson solve with any derivatives up to d^2_r.

    ``backend`` selects the radial ODE solver: "green" (default) or
    "spectral_integration" (comparison backend, single panel only).
    """
    return _solve(f, req, config, fourth=False, grid=grid, backend=backend)


def solve_biharmonic(f, req: DerivativeRequest, config: SolverConfig,
                     grid: CylGrid | None = None) -> SolutionBundle:
    """Free-space biharmonic solve with any derivatives up to d^3_r.

    Second- and higher-order derivative combinations carry full accuracy;
    the potential itself and first derivatives are flagged reduced-accuracy
    (their kappa-space singularity exceeds the log class the rule handles).
    """
    return _solve(f, req, config, fourth=True, grid=grid)


def spectral_decay_report(f, config: SolverConfig,
                          grid: CylGrid | None = None) -> dict:
    """Resolution diagnostic: tail-to-peak ratios per direction.

    Ratios near machine precision indicate resolved data; a flag is raised
    for any direction whose tail exceeds the configured tolerance.
    """
    f = np.asarray(f, dtype=np.float64)
    if grid is None:
        grid = build_grid(config)
    report = {}

    coeffs = np.empty_like(f)
    for p in range(config.n_panels):
        sl = grid.panel_slice(p)
        coeffs[sl] = np.tensordot(grid.vals2coeffs, f[sl], axes=(1, 0))
    peak = np.max(np.abs(coeffs))
    tail = np.max(np.abs(coeffs.reshape(config.n_panels, config.cheb_order, -1)
                         [:, -2:, :])) if peak else 0.0
    report["r_tail_ratio"] = float(tail / peak) if peak else 0.0

    if config.n_theta > 1:
        modes = np.fft.rfft(f, axis=1)
        peak = np.max(np.abs(modes))
        tail = np.max(np.abs(modes[:, -2:, :]))
        report["theta_tail_ratio"] = float(tail / peak) if peak else 0.0
    else:
        report["theta_tail_ratio"] = 0.0

    fz = np.fft.rfft(f, axis=2)
    peak = np.max(np.abs(fz))
    tail = np.max(np.abs(fz[:, :, -2:]))
    report["kappa_tail_ratio"] = float(tail / peak) if peak else 0.0

    report["flags"] = sorted(k for k, v in report.items()
                             if isinstance(v, float) and v > config.tol)
    report["resolved"] = not report["flags"]
    return report

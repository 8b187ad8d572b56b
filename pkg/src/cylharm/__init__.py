"""cylharm: fast free-space elliptic solvers in cylindrical coordinates.

Spectrally accurate Poisson and biharmonic solvers on (r, theta, z) grids
with free-space radiation conditions, plus the axisymmetric Coulomb
collision operator assembled from Rosenbluth potentials, with analytic
Gaussian references for verification.
"""
from ._backend import BACKEND as kernel_backend
from .collision import (CollisionParams, CollisionResult,
                        collision_axisymmetric, rosenbluth_G, rosenbluth_H)
from .elliptic import (DerivativeRequest, SolutionBundle, solve_biharmonic,
                       solve_poisson, spectral_decay_report)
from .grids import CylGrid, SolverConfig, build_grid
from .radial import (RadialSolution, radiation_bc_residual,
                     solve_fourth_order, solve_modified_bessel,
                     spectral_integration_solve)
from .reference import (GaussianSpec, brute_force_poisson,
                        gaussian_biharmonic_exact, gaussian_collision_exact,
                        gaussian_poisson_exact, poisson_reference_fields,
                        sample_gaussians)
from .singquad import SingularRule, build_singular_rule, rule_nodes
from .specfun import ScaledBesselPair, bessel_ik_scaled, erf
from .transforms import (ModeField, SpectralModeField, theta_decompose,
                         theta_synthesize, z_forward, z_inverse_singular)

__version__ = "0.1.0"

__all__ = [
    "kernel_backend", "SolverConfig", "CylGrid", "build_grid",
    "SingularRule", "build_singular_rule", "rule_nodes",
    "ScaledBesselPair", "bessel_ik_scaled", "erf",
    "ModeField", "SpectralModeField", "theta_decompose", "theta_synthesize",
    "z_forward", "z_inverse_singular",
    "RadialSolution", "solve_modified_bessel", "solve_fourth_order",
    "spectral_integration_solve", "radiation_bc_residual",
    "DerivativeRequest", "SolutionBundle", "solve_poisson",
    "solve_biharmonic", "spectral_decay_report",
    "CollisionParams", "CollisionResult", "rosenbluth_H", "rosenbluth_G",
    "collision_axisymmetric",
    "GaussianSpec", "gaussian_poisson_exact", "gaussian_biharmonic_exact",
    "gaussian_collision_exact", "brute_force_poisson", "sample_gaussians",
    "poisson_reference_fields",
]

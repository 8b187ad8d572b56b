"""Endpoint-corrected trapezoidal rule for log-singular spectral integrands.

The inverse z-transform integrand behaves like s1(k) log|k| + s2(k) near
k = 0.  The rule keeps the plain trapezoidal lattice k_j = j*h away from the
origin (|j| >= m) and replaces the 2m-1 nearest lattice points with special
nodes and weights, mirrored about 0, that restore order-m accuracy.

Weights are fixed by Navot-regularized moment matching: on the half line the
lattice sum of a monomial k^q (resp. k^q log k) differs from the integral by
the analytic continuation zeta(-q) (resp. -zeta'(-q) plus log-h terms), so
exactness on {k^q, k^q log k : q < m} pins 2m weights per side.  The moment
system is solved in 60-digit arithmetic; correction nodes are quadratically
graded Legendre points, which keeps every weight O(h) so the rule loses
nothing when applied in double precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["SingularRule", "build_singular_rule", "rule_nodes"]


@dataclass(frozen=True)
class SingularRule:
    """Quadrature rule on [-kappa_max, kappa_max] avoiding the origin."""

    h: float
    order: int
    n_z_prime: int
    kappa_max: float
    regular_index: np.ndarray       # lattice indices j with |j| >= m
    correction_nodes: np.ndarray    # mirrored, sorted, all nonzero
    correction_weights: np.ndarray

    @property
    def regular_nodes(self) -> np.ndarray:
        return self.regular_index * self.h

    @property
    def regular_weight(self) -> float:
        return self.h

    def node_count(self) -> int:
        return len(self.regular_index) + len(self.correction_nodes)

    def integrate(self, f, endpoint_order: int | None = None) -> float:
        """Apply the rule to a callable.

        ``endpoint_order`` adds Gregory-type corrections of that order at
        +-kappa_max for integrands that do not vanish there (finite-interval
        use); bandlimited integrands need none.
        """
        total = self.h * np.sum(f(self.regular_nodes))
        total += np.sum(self.correction_weights * f(self.correction_nodes))
        if endpoint_order:
            mu, nu = _endpoint_weights(endpoint_order, self.h)
            y = np.arange(endpoint_order) * self.h
            total += np.sum(mu * f(self.kappa_max - y))
            total += np.sum(nu * f(-self.kappa_max + y))
        return total


_EXTRA_DEGREES = 6


def _one_sided_correction(m: int, h: float):
    """Graded-Legendre nodes on (0, m h) and moment-matched weights.

    Moments are matched through degree m + 5 (not m - 1): the inverse
    transform applies the rule to e^{i kappa z} integrands whose Taylor jet
    at the origin grows like A^q/q!, and the extra matched degrees remove
    that oscillatory error down to machine precision at eta = 4.
    """
    import mpmath as mp

    nq = m + _EXTRA_DEGREES
    x = ((np.polynomial.legendre.leggauss(2 * nq)[0] + 1) / 2) ** 2 * (m * h)
    with mp.workdps(60):
        xs = [mp.mpf(float(v)) for v in x]
        hh = mp.mpf(float(h))
        rows, rhs = [], []
        for q in range(nq):
            s_pow = mp.mpf(sum(mp.mpf(k) ** q for k in range(1, m)))
            s_log = mp.mpf(sum(mp.mpf(k) ** q * (mp.log(k) + mp.log(hh))
                               for k in range(1, m)))
            zq = mp.zeta(-q)
            zdq = mp.zeta(-q, 1, 1)
            rows.append([xi ** q for xi in xs])
            rhs.append(hh ** (q + 1) * (s_pow - zq))
            rows.append([xi ** q * mp.log(xi) for xi in xs])
            rhs.append(hh ** (q + 1) * (s_log + zdq - zq * mp.log(hh)))
        w = mp.lu_solve(mp.matrix(rows), mp.matrix(rhs))
    return x, np.array([float(v) for v in w])


@lru_cache(maxsize=64)
def _endpoint_weights(m: int, h: float):
    """Gregory-type order-m corrections for a smooth endpoint at +-kappa_max.

    Right end (lattice point absent): sum mu_i (i h)^q = -zeta(-q) h^{q+1};
    left end (lattice point present at full weight): extra -h at q = 0.
    """
    import mpmath as mp

    with mp.workdps(50):
        V = mp.matrix([[mp.mpf(i) ** q for i in range(m)] for q in range(m)])
        rhs_r, rhs_l = [], []
        for q in range(m):
            z = mp.zeta(-q)
            rhs_r.append(-z)
            rhs_l.append(-z - (1 if q == 0 else 0))
        mu = mp.lu_solve(V, mp.matrix(rhs_r))
        nu = mp.lu_solve(V, mp.matrix(rhs_l))
    # nodes were entered in units of h, so weights scale by h
    mu = h * np.array([float(v) for v in mu])
    nu = h * np.array([float(v) for v in nu])
    return mu, nu


@lru_cache(maxsize=128)
def _cached_rule(n_z_prime: int, a_prime: float, m: int) -> SingularRule:
    h = np.pi / a_prime
    j = np.arange(-n_z_prime // 2, n_z_prime // 2)
    j = j[np.abs(j) >= m]
    x, w = _one_sided_correction(m, h)
    nodes = np.concatenate([-x[::-1], x])
    weights = np.concatenate([w[::-1], w])
    return SingularRule(
        h=h, order=m, n_z_prime=n_z_prime,
        kappa_max=(n_z_prime // 2) * h,
        regular_index=j,
        correction_nodes=nodes,
        correction_weights=weights,
    )


def build_singular_rule(n_z_prime: int, a_prime: float, m: int) -> SingularRule:
    """Rule with lattice spacing h = pi / a_prime on the padded transform."""
    if m < 2:
        raise ValueError("order m must be >= 2")
    if n_z_prime <= 2 * m:
        raise ValueError("n_z_prime must exceed 2 m")
    return _cached_rule(int(n_z_prime), float(a_prime), int(m))


def rule_nodes(rule: SingularRule) -> np.ndarray:
    """All kappa nodes (regular + correction), sorted, duplicate-free."""
    return np.unique(np.concatenate([rule.regular_nodes,
                                     rule.correction_nodes]))

"""Principal eigenpair of -Laplace + V with Robin boundary conditions."""

from dataclasses import dataclass

import numpy as np

from .errors import MaxIterations
from .operator import assemble

__all__ = ["EigenPair", "principal_eigenvalue", "robin_lambda1", "comparison_potentials", "adjoint_potential"]


@dataclass
class EigenPair:
    sigma1: float
    phi: np.ndarray
    residual: float
    iterations: int
    sup_norm: float  # max |phi| under the L2 = 1 scaling

    @property
    def phi_sup_normalized(self):
        return self.phi / self.sup_norm


def principal_eigenvalue(grid, q, V=None, tol=1e-11, res_tol=1e-9, maxiter=20000):
    """Smallest eigenvalue and positive eigenfunction by shifted inverse iteration.

    Iterates with (A + s I)^{-1}, s = max(0, -min V) + 1, until successive
    Rayleigh quotients agree to ``tol`` (relative to max(1, |sigma|)) and the
    eigen-residual is below ``res_tol * max(1, |sigma|)``. The eigenfunction
    is scaled to unit L2 norm and positive sum.
    """
    A = assemble(grid, q, V)
    V = A.potential
    shift = max(0.0, -float(V.min())) + 1.0
    solver = A.shifted(shift)
    w = A.weights

    x = np.ones(grid.size)
    x /= np.sqrt(np.sum(w * x * x))
    rho_old = A.rayleigh(x)
    for it in range(1, maxiter + 1):
        y = solver.lu().solve(x)
        x = y / np.sqrt(np.sum(w * y * y))
        Ax = A.apply(x)
        rho = float(np.sum(w * Ax * x))
        scale = max(1.0, abs(rho))
        r = Ax - rho * x
        residual = float(np.sqrt(np.sum(w * r * r)))
        if abs(rho - rho_old) <= tol * scale and residual <= res_tol * scale:
            break
        rho_old = rho
    else:
        raise MaxIterations(f"inverse iteration did not converge in {maxiter} steps (sigma ~ {rho:g})")

    if x.sum() < 0:
        x = -x
    if not np.all(x > 0):
        raise MaxIterations("principal eigenvector is not positive; eigenvalue gap too small")
    return EigenPair(sigma1=rho, phi=x, residual=residual, iterations=it, sup_norm=float(x.max()))


def robin_lambda1(grid, q):
    """Principal eigenvalue of the Robin Laplacian (V = 0) on ``grid``."""
    return principal_eigenvalue(grid, q).sigma1


def comparison_potentials(u_h, u_g, h, params):
    """Potentials V1 (one state) and V2 (two states) built from u_h, u_g, h.

    V1 = lam(-1 + h + u_h/K + c u_h/(1 + u_h^2)) has sigma1 = 0 whenever u_h
    is a positive state solution. V2 swaps in the two-state difference
    quotient of the reaction and collapses to V1 when u_g = 0.
    """
    u_h = np.asarray(u_h, dtype=float)
    u_g = np.asarray(u_g, dtype=float)
    h = np.asarray(h, dtype=float)
    lam, K, c = params.lam, params.K, params.c
    V1 = lam * (-1.0 + h + u_h / K + c * u_h / (1.0 + u_h**2))
    V2 = lam * (-1.0 + h + (u_h + u_g) / K + c * (u_h + u_g) / ((1.0 + u_h**2) * (1.0 + u_g**2)))
    return V1, V2


def adjoint_potential(u, h, params):
    """lam(-1 + 2u/K + 2cu/(1+u^2)^2 + h) = -lam f_h'(u)."""
    u = np.asarray(u, dtype=float)
    h = np.asarray(h, dtype=float)
    return params.lam * (-1.0 + 2.0 * u / params.K + 2.0 * params.c * u / (1.0 + u * u) ** 2 + h)

"""Adjoint and sensitivity problems linearized about a state solution.

Both share one operator, -Laplace + lam(-1 + 2u/K + 2cu/(1+u^2)^2 + h), so the
discrete duality  int psi h = -lam int gamma u p  holds to solver precision.
"""

from dataclasses import dataclass

import numpy as np

from .eigen import adjoint_potential, principal_eigenvalue
from .errors import NotCoercive
from .operator import assemble, l2_norm, solve_linear
from .state import solve_state

__all__ = ["AdjointSolution", "linearized_operator", "solve_adjoint", "solve_sensitivity", "sensitivity_fd_errors"]


@dataclass
class AdjointSolution:
    p: np.ndarray
    potential: np.ndarray
    sigma1_check: float
    residual: float


def linearized_operator(u, h, grid, params, check=True):
    """Assemble the linearized state operator; returns (operator, sigma1).

    With ``check`` the principal eigenvalue is computed first and
    `NotCoercive` is raised unless it is positive.
    """
    V = adjoint_potential(u, np.broadcast_to(h, np.shape(u)), params)
    sigma1 = float("nan")
    if check:
        sigma1 = principal_eigenvalue(grid, params.q, V).sigma1
        if not sigma1 > 0:
            raise NotCoercive(f"linearized operator has sigma1 = {sigma1:.6g} <= 0")
    return assemble(grid, params.q, V), sigma1


def _relres(A, x, b):
    bnorm = np.linalg.norm(b)
    return 0.0 if bnorm == 0 else float(np.linalg.norm(A.apply(x) - b) / bnorm)


def solve_adjoint(u, h, grid, params, operator=None):
    """Solve -Laplace p - lam f_h'(u) p = h with homogeneous Robin data."""
    h = np.broadcast_to(np.asarray(h, dtype=float), (grid.size,)).copy()
    if operator is None:
        A, sigma1 = linearized_operator(u, h, grid, params)
    else:
        A, sigma1 = operator
    p = solve_linear(A, h)
    return AdjointSolution(p=p, potential=A.potential, sigma1_check=sigma1, residual=_relres(A, p, h))


def solve_sensitivity(u, h, gamma, grid, params, operator=None):
    """Derivative of the state in direction ``gamma``: source -lam gamma u."""
    u = np.asarray(u, dtype=float)
    gamma = np.broadcast_to(np.asarray(gamma, dtype=float), (grid.size,))
    A, _ = operator if operator is not None else linearized_operator(u, h, grid, params)
    return solve_linear(A, -params.lam * gamma * u)


def sensitivity_fd_errors(h, gamma, grid, params, epsilons=(1e-2, 1e-3, 1e-4)):
    """L2 distance between (u_{h + eps gamma} - u_h) / eps and psi, per eps.

    Returns (psi, errors).
    """
    h = np.broadcast_to(np.asarray(h, dtype=float), (grid.size,)).copy()
    gamma = np.broadcast_to(np.asarray(gamma, dtype=float), (grid.size,))
    u = solve_state(h, grid, params).u
    psi = solve_sensitivity(u, h, gamma, grid, params)
    errors = []
    for eps in epsilons:
        ue = solve_state(h + eps * gamma, grid, params).u
        errors.append(l2_norm(grid, (ue - u) / eps - psi))
    return psi, errors

"""Optimal harvesting of a logistically growing, grazed population.

Steady states of -Laplace u = lam (u - u^2/K - c u^2/(1+u^2) - h u) with Robin
boundary conditions, their adjoint and sensitivity problems, principal
eigenvalue diagnostics, and the projection-based optimal effort.
"""

__version__ = "0.1.0"

from .adjoint import AdjointSolution, solve_adjoint, solve_sensitivity
from .eigen import EigenPair, comparison_potentials, principal_eigenvalue
from .model import ModelParams, WellposednessReport, compute_r0, reaction, reaction_derivative, wellposedness
from .operator import ControlField, GridSpec, ScalarField, assemble, integrate, solve_linear
from .optimize import (
    SweepResult,
    bang_bang_control,
    brute_force_oracle,
    forward_backward_sweep,
    gradient_check,
    payoff,
    project_control,
)
from .state import StateSolution, newton_refine, solve_autonomous, solve_state

__all__ = [
    "AdjointSolution", "ControlField", "EigenPair", "GridSpec", "ModelParams", "ScalarField",
    "StateSolution", "SweepResult", "WellposednessReport", "assemble", "bang_bang_control",
    "brute_force_oracle", "compute_r0", "forward_backward_sweep", "gradient_check", "integrate",
    "comparison_potentials", "newton_refine", "payoff", "principal_eigenvalue", "project_control",
    "reaction", "reaction_derivative", "solve_adjoint", "solve_autonomous", "solve_linear",
    "solve_sensitivity", "solve_state", "wellposedness",
]

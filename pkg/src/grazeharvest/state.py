"""Positive solutions of -Laplace u = lam f_h(u) with Robin boundary conditions.

The maximal solution is reached by monotone iteration down from the constant
supersolution K, the minimal one by iterating up from the autonomous solution
with the largest admissible effort. Both are optionally polished by damped
Newton on the discrete residual.
"""

from dataclasses import dataclass

import numpy as np

from .errors import Diverged, Extinct, JacobianSingular, MaxIterations, NotMonotone
from .model import reaction, reaction_derivative
from .operator import assemble

__all__ = ["StateSolution", "solve_autonomous", "solve_state", "newton_refine", "state_residual"]

STEP_TOL = 1e-11  # successive-iterate stop, relative to K
EXTINCT_TOL = 1e-8  # sup-norm below this (relative to K) is the trivial solution
NEWTON_RTOL = 1e-12  # relative to lam * K
MONOTONE_SLACK = 1e-9  # rounding allowance for the ordering check, relative to K


@dataclass
class StateSolution:
    u: np.ndarray
    control: np.ndarray
    iterations: int
    residual: float
    bracket_lo: float
    bracket_hi: float
    extinct: bool
    newton_iterations: int = 0
    grid: object = None


def _control_values(h, grid, params):
    h = np.asarray(h, dtype=float)
    if h.ndim == 0:
        h = np.full(grid.size, float(h))
    if h.size != grid.size:
        raise ValueError("control does not match grid")
    if h.min() < -1e-12 or h.max() > params.H + 1e-12:
        raise ValueError(f"control leaves the admissible box [0, {params.H}]")
    return np.clip(h, 0.0, params.H)


def state_residual(u, h, grid, params, lap=None):
    """sup-norm of the discrete residual  -Laplace u - lam f_h(u)."""
    lap = lap if lap is not None else assemble(grid, params.q)
    return float(np.max(np.abs(lap.apply(u) - params.lam * reaction(u, h, params))))


def _monotone(u, h, grid, params, lap, direction, maxiter):
    lam, K = params.lam, params.K
    sigma = lam * (3.0 + params.c + params.H)
    shifted = lap.shifted(sigma)
    slack = MONOTONE_SLACK * K
    for it in range(1, maxiter + 1):
        u_new = shifted.lu().solve(lam * reaction(u, h, params) + sigma * u)
        step = u_new - u
        if (direction * step).min() < -slack:
            raise NotMonotone(f"iterate {it} broke the ordering by {np.abs(step).max():.3e}")
        u = u_new
        if np.abs(step).max() <= STEP_TOL * K:
            return u, it
    raise MaxIterations(f"monotone iteration did not settle in {maxiter} steps")


def _finish(u, h, grid, params, lap, iterations, refine):
    K = params.K
    bracket = (K * (1.0 - params.H) / 2.0, K)
    if np.abs(u).max() < EXTINCT_TOL * K:
        sol = StateSolution(
            u=np.zeros_like(u), control=h, iterations=iterations,
            residual=state_residual(np.zeros_like(u), h, grid, params, lap),
            bracket_lo=bracket[0], bracket_hi=bracket[1], extinct=True, grid=grid,
        )
        raise Extinct(
            f"iteration collapsed to u = 0 (lambda = {params.lam:g} is below the existence threshold)",
            solution=sol,
        )
    newton_its = 0
    if refine:
        refined = newton_refine(u, h, grid, params, lap=lap)
        u, newton_its = refined.u, refined.newton_iterations
    return StateSolution(
        u=u, control=h, iterations=iterations,
        residual=state_residual(u, h, grid, params, lap),
        bracket_lo=bracket[0], bracket_hi=bracket[1], extinct=False,
        newton_iterations=newton_its, grid=grid,
    )


def solve_autonomous(alpha, grid, params, refine=True, maxiter=20000):
    """Solution for the constant effort ``alpha``, iterated down from K."""
    if not 0.0 <= alpha <= params.H:
        raise ValueError(f"alpha must lie in [0, {params.H}]")
    return solve_state(np.full(grid.size, float(alpha)), grid, params, refine=refine, maxiter=maxiter)


def solve_state(h, grid, params, from_above=True, refine=True, maxiter=20000):
    """Solve the state equation for effort ``h``.

    ``from_above`` selects the maximal solution (descending from u = K);
    otherwise the iteration ascends from the constant-effort-H solution and
    returns the minimal one.
    """
    h = _control_values(h, grid, params)
    lap = assemble(grid, params.q)
    if from_above:
        u0 = np.full(grid.size, params.K)
        u, its = _monotone(u0, h, grid, params, lap, -1, maxiter)
    else:
        sub = solve_autonomous(params.H, grid, params, refine=refine, maxiter=maxiter)
        u, its = _monotone(sub.u, h, grid, params, lap, +1, maxiter)
        its += sub.iterations
    return _finish(u, h, grid, params, lap, its, refine)


def newton_refine(u0, h, grid, params, lap=None, rtol=NEWTON_RTOL, maxiter=50):
    """Damped Newton on F(u) = -Laplace u - lam f_h(u).

    Steps are halved until the residual decreases. Stops when the residual
    drops below ``rtol * lam * K`` or a full step changes u by no more than
    rounding.
    """
    h = _control_values(h, grid, params)
    lap = lap if lap is not None else assemble(grid, params.q)
    lam, K = params.lam, params.K
    tol = rtol * lam * K
    eps = np.finfo(float).eps

    def F(v):
        return lap.apply(v) - lam * reaction(v, h, params)

    u = np.array(u0, dtype=float)
    r = F(u)
    rnorm = np.abs(r).max()
    its = 0
    while rnorm > tol:
        if its == maxiter:
            raise Diverged(f"Newton residual {rnorm:.3e} after {maxiter} steps")
        its += 1
        jac = lap.shifted(-lam * reaction_derivative(u, h, params))
        try:
            delta = -jac.lu().solve(r)
        except RuntimeError as exc:
            raise JacobianSingular(str(exc)) from exc
        if not np.all(np.isfinite(delta)):
            raise JacobianSingular("Newton step is not finite")
        t = 1.0
        while True:
            trial = u + t * delta
            r_trial = F(trial)
            if np.abs(r_trial).max() < rnorm or t < 1e-10:
                break
            t *= 0.5
        if t < 1e-10:
            # no decrease possible: the residual sits at its rounding floor
            if np.abs(delta).max() <= 64 * eps * K:
                break
            raise Diverged(f"line search failed at residual {rnorm:.3e}")
        u, r = trial, r_trial
        rnorm = np.abs(r).max()
        if t == 1.0 and np.abs(delta).max() <= 64 * eps * K:
            break
    return StateSolution(
        u=u, control=h, iterations=0, residual=float(rnorm),
        bracket_lo=K * (1.0 - params.H) / 2.0, bracket_hi=K, extinct=False,
        newton_iterations=its, grid=grid,
    )

"""Payoff, projection formula, forward-backward sweep and a brute-force check."""

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .adjoint import solve_adjoint
from .errors import DivisionByZero, NotConverged, TooManyCombinations
from .operator import integrate
from .state import solve_state

__all__ = [
    "SweepResult",
    "GradientReport",
    "payoff",
    "switching_function",
    "project_control",
    "bang_bang_control",
    "forward_backward_sweep",
    "stationarity_residual",
    "brute_force_oracle",
    "piecewise_control",
    "gradient_check",
    "adjoint_bound_trend",
]


def payoff(h, u, grid, params):
    """J(h) = int h u - int (B1 + B2 h) h, trapezoid rule."""
    h = np.broadcast_to(np.asarray(h, dtype=float), (grid.size,))
    u = np.asarray(u, dtype=float)
    return integrate(grid, h * u - (params.B1 + params.B2 * h) * h)


def switching_function(u, p, params):
    """u - lam p u - B1; the control is increased where this is positive."""
    u = np.asarray(u, dtype=float)
    return u - params.lam * np.asarray(p, dtype=float) * u - params.B1


def project_control(u, p, params):
    """Pointwise clamp of (u - lam p u - B1) / (2 B2) onto [0, H]."""
    if params.B2 == 0:
        raise DivisionByZero("B2 = 0: use bang_bang_control")
    raw = switching_function(u, p, params) / (2.0 * params.B2)
    return np.clip(raw, 0.0, params.H)


def bang_bang_control(u, p, params, tol_switch=None):
    """H where the switching function is positive, 0 where negative.

    Nodes inside the band |s| <= tol_switch (default 1e-8 K) get H/2.
    """
    tol_switch = 1e-8 * params.K if tol_switch is None else tol_switch
    s = switching_function(u, p, params)
    h = np.where(s > 0, params.H, 0.0)
    h[np.abs(s) <= tol_switch] = 0.5 * params.H
    return h


@dataclass
class SweepResult:
    h_opt: np.ndarray
    u_opt: np.ndarray
    p_opt: np.ndarray
    J_trace: list
    residual_trace: list
    fixed_point_residual: float
    iterations: int
    converged: bool
    omega: float
    sigma1_trace: list = field(default_factory=list)
    band_nodes: int = 0

    @property
    def J(self):
        return self.J_trace[-1]


def forward_backward_sweep(
    h0, grid, params, omega=0.5, tol=1e-9, maxiter=500, bang_bang=False, raise_on_failure=True
):
    """Fixed-point iteration on the optimality system.

    Each pass solves the state (maximal solution) and adjoint for the current
    control, forms the projected control, and relaxes toward it with weight
    ``omega``. ``omega`` is halved whenever the fixed-point residual grows
    twice in a row. Stops once ||project(u, p) - h||_inf <= tol.
    """
    h = np.broadcast_to(np.asarray(h0, dtype=float), (grid.size,)).copy()
    update = bang_bang_control if bang_bang else project_control
    J_trace, res_trace, sig_trace = [], [], []
    converged = False
    growth = 0
    for k in range(maxiter + 1):
        state = solve_state(h, grid, params)
        u = state.u
        adj = solve_adjoint(u, h, grid, params)
        target = update(u, adj.p, params)
        r = float(np.abs(target - h).max())
        J_trace.append(payoff(h, u, grid, params))
        res_trace.append(r)
        sig_trace.append(adj.sigma1_check)
        if r <= tol:
            converged = True
            break
        if k == maxiter:
            break
        growth = growth + 1 if len(res_trace) > 1 and r > res_trace[-2] else 0
        if growth >= 2:
            omega *= 0.5
            growth = 0
        h = (1.0 - omega) * h + omega * target

    band = 0
    if bang_bang:
        band = int(np.sum(np.abs(switching_function(u, adj.p, params)) <= 1e-8 * params.K))
    result = SweepResult(
        h_opt=h, u_opt=u, p_opt=adj.p, J_trace=J_trace, residual_trace=res_trace,
        fixed_point_residual=r, iterations=k, converged=converged, omega=omega,
        sigma1_trace=sig_trace, band_nodes=band,
    )
    if not converged and raise_on_failure:
        raise NotConverged(f"sweep stopped at residual {r:.3e} after {k} iterations", trace=J_trace, result=result)
    return result


def stationarity_residual(result, params, margin=1e-9):
    """max |u - lam u p - B1 - 2 B2 h| over nodes with margin < h < H - margin.

    Returns (residual, number of interior nodes); the residual is 0 when no
    node is strictly inside the box.
    """
    h = result.h_opt
    inside = (h > margin) & (h < params.H - margin)
    if not inside.any():
        return 0.0, 0
    s = switching_function(result.u_opt, result.p_opt, params) - 2.0 * params.B2 * h
    return float(np.abs(s[inside]).max()), int(inside.sum())


def piecewise_control(grid, levels):
    """Control equal to levels[i] on the i-th of len(levels) equal slabs along x."""
    (a, b) = grid.extents[0]
    x = grid.coords()[0]
    m = len(levels)
    idx = np.minimum(((x - a) / (b - a) * m).astype(int), m - 1)
    return np.asarray(levels, dtype=float)[idx]


def brute_force_oracle(partitions, levels, grid, params, max_combinations=10_000, workers=None):
    """Best piecewise-constant control over every assignment of ``levels``.

    Candidates are enumerated in lexicographic order; ties keep the first.
    Returns (h, J).
    """
    levels = [float(v) for v in levels]
    if any(v < 0 or v > params.H for v in levels):
        raise ValueError(f"levels must lie in [0, {params.H}]")
    count = len(levels) ** partitions
    if count > max_combinations:
        raise TooManyCombinations(f"{count} candidates exceed the limit {max_combinations}")
    candidates = [piecewise_control(grid, combo) for combo in itertools.product(levels, repeat=partitions)]

    def evaluate(h):
        return payoff(h, solve_state(h, grid, params).u, grid, params)

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            values = list(pool.map(evaluate, candidates))
    else:
        values = [evaluate(h) for h in candidates]
    best = int(np.argmax(values))
    return candidates[best], values[best]


@dataclass
class GradientReport:
    analytic: float
    finite_differences: list
    epsilons: list
    errors: list
    slope: float


def gradient_check(h, gamma, grid, params, epsilons=(1e-2, 1e-3, 1e-4)):
    """Compare one-sided difference quotients of J with the adjoint gradient.

    ``slope`` is the least-squares slope of log|FD - analytic| against log eps;
    it is nan when the discrepancies vanish.
    """
    h = np.broadcast_to(np.asarray(h, dtype=float), (grid.size,)).copy()
    gamma = np.broadcast_to(np.asarray(gamma, dtype=float), (grid.size,)).copy()
    u = solve_state(h, grid, params).u
    p = solve_adjoint(u, h, grid, params).p
    grad = switching_function(u, p, params) - 2.0 * params.B2 * h
    analytic = integrate(grid, gamma * grad)
    J0 = payoff(h, u, grid, params)
    fds, errs = [], []
    for eps in epsilons:
        he = h + eps * gamma
        ue = solve_state(he, grid, params).u
        fd = (payoff(he, ue, grid, params) - J0) / eps
        fds.append(fd)
        errs.append(abs(fd - analytic))
    errs_arr = np.asarray(errs)
    if np.all(errs_arr > 0):
        slope = float(np.polyfit(np.log(epsilons), np.log(errs_arr), 1)[0])
    else:
        slope = float("nan")
    return GradientReport(analytic=analytic, finite_differences=fds, epsilons=list(epsilons), errors=errs, slope=slope)


def adjoint_bound_trend(grid, params, B2_values=(10.0, 20.0, 40.0, 80.0), h0=0.0, **sweep_kw):
    """Run the sweep for each B2 and collect (B2, ||p||_inf, B2 ||p||_inf)."""
    rows = []
    for B2 in B2_values:
        res = forward_backward_sweep(h0, grid, params.replace(B2=B2), **sweep_kw)
        pmax = float(np.abs(res.p_opt).max())
        rows.append((B2, pmax, B2 * pmax))
    return rows


import numpy as np
import pytest

from grazeharvest import GridSpec, ModelParams, solve_state
from grazeharvest.adjoint import linearized_operator, sensitivity_fd_errors, solve_adjoint, solve_sensitivity
from grazeharvest.errors import NotCoercive
from grazeharvest.operator import integrate

# ||p||_inf for h = H on the canonical config, Richardson-extrapolated from
# n = 1025 and n = 2049 (independent fine-grid runs)
P_SUP_EXTRAPOLATED = 0.0009812325545190787


def test_zero_source_gives_zero(params, grid, u_zero):
    adj = solve_adjoint(u_zero, np.zeros(grid.size), grid, params)
    assert np.all(adj.p == 0)
    assert adj.sigma1_check > 0


def test_symmetric_data_symmetric_adjoint(params, grid):
    x = grid.coords()[0]
    h = params.H * (0.5 + 0.5 * np.cos(2 * np.pi * x))
    u = solve_state(h, grid, params).u
    p = solve_adjoint(u, h, grid, params).p
    assert np.abs(p - p[::-1]).max() <= 1e-10


def test_canonical_full_effort_pinned(params, grid, u_full):
    adj = solve_adjoint(u_full, params.H, grid, params)
    assert adj.residual <= 1e-10
    assert adj.p.min() >= -1e-12
    p_sup = adj.p.max()
    assert np.isfinite(p_sup) and p_sup > 0
    assert p_sup == pytest.approx(P_SUP_EXTRAPOLATED, rel=1e-5)


def test_maximum_principle(params, grid, rng):
    h = rng.uniform(0, params.H, grid.size)
    u = solve_state(h, grid, params).u
    assert solve_adjoint(u, h, grid, params).p.min() >= -1e-12


def test_sensitivity_zero_and_linear(params, grid, u_full, rng):
    h = np.full(grid.size, params.H)
    op = linearized_operator(u_full, h, grid, params)
    assert np.all(solve_sensitivity(u_full, h, np.zeros(grid.size), grid, params, operator=op) == 0)
    gamma = rng.normal(size=grid.size)
    psi1 = solve_sensitivity(u_full, h, gamma, grid, params, operator=op)
    psi2 = solve_sensitivity(u_full, h, 2 * gamma, grid, params, operator=op)
    assert np.abs(psi2 - 2 * psi1).max() <= 1e-10 * max(1, np.abs(psi1).max())


def test_duality_identity(params, grid, rng):
    h = rng.uniform(0, params.H, grid.size)
    u = solve_state(h, grid, params).u
    op = linearized_operator(u, h, grid, params)
    p = solve_adjoint(u, h, grid, params, operator=op).p
    for _ in range(10):
        gamma = rng.normal(size=grid.size)
        psi = solve_sensitivity(u, h, gamma, grid, params, operator=op)
        lhs = integrate(grid, psi * h)
        rhs = -params.lam * integrate(grid, gamma * u * p)
        assert abs(lhs - rhs) <= 1e-8 * abs(rhs)


def test_sensitivity_matches_difference_quotients(params, grid, rng):
    gamma = rng.uniform(-1, 1, grid.size)
    _, errs = sensitivity_fd_errors(0.15, gamma, grid, params)
    slope = np.polyfit(np.log([1e-2, 1e-3, 1e-4]), np.log(errs), 1)[0]
    assert slope == pytest.approx(1.0, abs=0.2)
    assert errs[-1] < errs[0]


def test_not_coercive_guard():
    # linearizing about a field far below the positive state gives an indefinite operator
    grid = GridSpec.interval(33)
    p = ModelParams(lam=50.0)
    u = np.full(grid.size, 0.5)  # far below the positive solution: -f'(u) < 0
    with pytest.raises(NotCoercive):
        solve_adjoint(u, np.zeros(grid.size), grid, p)

import numpy as np
import pytest
from conftest import random_control

from grazeharvest import GridSpec, ModelParams
from grazeharvest.errors import Extinct, NotMonotone
from grazeharvest.model import compute_r0
from grazeharvest.state import newton_refine, solve_autonomous, solve_state, state_residual


def test_autonomous_bracket(params, grid, u_full):
    r0 = compute_r0(params.H, params)
    lo = params.K * (1 - params.H) / 2
    assert u_full.min() >= lo
    assert u_full.max() <= r0 + 1e-8 * params.K


def test_autonomous_ordering(u_zero, u_full, params):
    assert np.all(u_full <= u_zero)
    assert u_zero.max() < params.K


def test_solution_record(params, grid):
    sol = solve_autonomous(0.1, grid, params)
    assert not sol.extinct
    assert sol.residual <= 1e-9 * params.lam
    assert sol.bracket_lo == pytest.approx(7.0)
    assert sol.bracket_hi == 20.0
    tol = 1e-8 * params.K
    assert np.all(sol.u >= sol.bracket_lo - tol) and np.all(sol.u <= sol.bracket_hi + tol)


def test_zero_control_matches_autonomous(params, grid, u_zero):
    sol = solve_state(np.zeros(grid.size), grid, params)
    assert np.abs(sol.u - u_zero).max() <= 1e-10


def test_extinction_below_threshold(grid):
    p = ModelParams(lam=0.1)
    with pytest.raises(Extinct) as exc:
        solve_autonomous(0.0, grid, p)
    assert exc.value.solution.extinct
    assert np.all(exc.value.solution.u == 0)


def test_rejects_inadmissible_control(params, grid):
    with pytest.raises(ValueError):
        solve_state(np.full(grid.size, 0.5), grid, params)


def test_from_above_and_below_agree(params, grid, rng):
    h = random_control(rng, grid, params.H, smooth=True)
    up = solve_state(h, grid, params, from_above=True)
    down = solve_state(h, grid, params, from_above=False)
    assert np.abs(up.u - down.u).max() <= 1e-8


def test_monotone_iterates_are_ordered(params, coarse_grid, monkeypatch):
    # record every iterate of the descending sequence and check the ordering
    from grazeharvest import state as state_mod

    seen = []
    original = state_mod._monotone

    def spy(u, h, grid, p, lap, direction, maxiter):
        lam, sigma = p.lam, p.lam * (3 + p.c + p.H)
        shifted = lap.shifted(sigma)
        cur = u
        for _ in range(40):
            cur = shifted.lu().solve(lam * state_mod.reaction(cur, h, p) + sigma * cur)
            seen.append(cur)
        return original(u, h, grid, p, lap, direction, maxiter)

    monkeypatch.setattr(state_mod, "_monotone", spy)
    solve_state(0.2, coarse_grid, params)
    diffs = [b - a for a, b in zip(seen, seen[1:])]
    assert all(d.max() <= 1e-9 * params.K for d in diffs)


def test_not_monotone_raised_on_bad_start(params, coarse_grid):
    # a start that is not a supersolution breaks the descending order
    from grazeharvest.operator import assemble
    from grazeharvest.state import _monotone

    lap = assemble(coarse_grid, params.q)
    with pytest.raises(NotMonotone):
        _monotone(np.full(coarse_grid.size, 1.0), np.zeros(coarse_grid.size), coarse_grid, params, lap, -1, 100)


def test_newton_fixed_point(params, grid, u_full):
    out = newton_refine(u_full, params.H, grid, params)
    assert out.newton_iterations == 0
    np.testing.assert_array_equal(out.u, u_full)


def test_newton_after_monotone_is_fast(params, grid):
    raw = solve_state(0.15, grid, params, refine=False)
    out = newton_refine(raw.u, 0.15, grid, params)
    assert out.newton_iterations <= 5
    assert out.residual <= 1e-12 * params.lam * params.K


def test_newton_from_constant_K(params, grid, u_full):
    out = newton_refine(np.full(grid.size, params.K), params.H, grid, params)
    assert np.abs(out.u - u_full).max() <= 1e-8


def test_comparison_more_harvest_less_stock(params, coarse_grid, rng):
    for _ in range(20):
        h1 = rng.uniform(0, params.H, coarse_grid.size)
        h2 = np.minimum(h1 + rng.uniform(0, params.H, coarse_grid.size), params.H)
        u1 = solve_state(h1, coarse_grid, params).u
        u2 = solve_state(h2, coarse_grid, params).u
        assert np.all(u2 <= u1 + 1e-10)


def test_sandwich_random_controls(params, coarse_grid, rng):
    u0 = solve_autonomous(0.0, coarse_grid, params).u
    uH = solve_autonomous(params.H, coarse_grid, params).u
    for _ in range(20):
        u = solve_state(rng.uniform(0, params.H, coarse_grid.size), coarse_grid, params).u
        assert np.all(uH <= u + 1e-10) and np.all(u <= u0 + 1e-10)


def test_residual_helper(params, grid, u_full):
    assert state_residual(u_full, params.H, grid, params) <= 1e-9 * params.lam


def test_2d_state_bracket(params):
    grid = GridSpec.rectangle(21, 21)
    sol = solve_state(0.3, grid, params)
    assert sol.residual <= 1e-9 * params.lam
    assert sol.u.min() >= params.K * (1 - params.H) / 2
    assert sol.u.max() < params.K

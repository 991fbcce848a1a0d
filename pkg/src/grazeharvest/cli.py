"""Command line entry point.

    grazeharvest <mode> --config <path> [--out <dir>] [--seed <n>]

Writes ``report.txt`` always, ``fields.csv`` when a field was computed and
``trace.csv`` in optimize mode. Exit codes: 0 success, 1 configuration error,
2 iteration did not converge, 3 inputs outside the model's regime.
"""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .adjoint import solve_adjoint, solve_sensitivity
from .config import MODES, parse_config
from .eigen import adjoint_potential, comparison_potentials, principal_eigenvalue
from .errors import ConfigError, HarvestError, NotConverged, RegimeError
from .model import wellposedness
from .optimize import (
    adjoint_bound_trend,
    brute_force_oracle,
    forward_backward_sweep,
    stationarity_residual,
)
from .state import solve_state
from .verification import convergence_table

log = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_NOT_CONVERGED, EXIT_REGIME = 0, 1, 2, 3


def _fmt(v):
    return format(float(v), ".17g")


def write_fields(path, grid, columns):
    """CSV with node coordinates followed by ``columns`` (name -> array)."""
    coords = grid.coords()
    names = ["x", "y"][: grid.dim] + list(columns)
    data = list(coords) + [np.asarray(v, dtype=float) for v in columns.values()]
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(names) + "\n")
        for row in zip(*data):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_trace(path, result):
    with open(path, "w", newline="\n") as fh:
        fh.write("iteration,J,fixed_point_residual,sigma1_adjoint\n")
        for k, (J, r, s) in enumerate(zip(result.J_trace, result.residual_trace, result.sigma1_trace)):
            fh.write(f"{k},{_fmt(J)},{_fmt(r)},{_fmt(s)}\n")


def _initial_control(cfg, grid):
    if cfg.h0 == "random":
        rng = np.random.default_rng(cfg.seed)
        return rng.uniform(0.0, cfg.H, grid.size)
    return np.full(grid.size, float(cfg.h0))


def _kv(lines, key, value):
    if isinstance(value, float | np.floating):
        value = _fmt(value)
    lines.append(f"{key} = {value}")


def _run_eigen(cfg, grid, params, out, lines):
    base = principal_eigenvalue(grid, params.q)
    _kv(lines, "lambda1", base.sigma1)
    _kv(lines, "lambda1_iterations", base.iterations)
    cols = {"phi": base.phi}
    try:
        u0 = solve_state(0.0, grid, params).u
        uH = solve_state(params.H, grid, params).u
    except RegimeError as exc:
        _kv(lines, "sigma1_state_potentials", f"unavailable ({type(exc).__name__})")
    else:
        V1, V2 = comparison_potentials(u0, uH, np.zeros(grid.size), params)
        _kv(lines, "sigma1_V1", principal_eigenvalue(grid, params.q, V1).sigma1)
        _kv(lines, "sigma1_V2", principal_eigenvalue(grid, params.q, V2).sigma1)
        Va = adjoint_potential(u0, np.zeros(grid.size), params)
        _kv(lines, "sigma1_adjoint", principal_eigenvalue(grid, params.q, Va).sigma1)
    write_fields(out / "fields.csv", grid, cols)


def _state_lines(lines, sol):
    _kv(lines, "state_iterations", sol.iterations)
    _kv(lines, "newton_iterations", sol.newton_iterations)
    _kv(lines, "state_residual", sol.residual)
    _kv(lines, "u_min", float(sol.u.min()))
    _kv(lines, "u_max", float(sol.u.max()))
    _kv(lines, "bracket_lo", sol.bracket_lo)
    _kv(lines, "bracket_hi", sol.bracket_hi)
    _kv(lines, "extinct", sol.extinct)


def _run_state(cfg, grid, params, out, lines):
    h = _initial_control(cfg, grid)
    sol = solve_state(h, grid, params)
    _state_lines(lines, sol)
    write_fields(out / "fields.csv", grid, {"u": sol.u, "h": h})


def _run_adjoint(cfg, grid, params, out, lines):
    h = _initial_control(cfg, grid)
    sol = solve_state(h, grid, params)
    _state_lines(lines, sol)
    adj = solve_adjoint(sol.u, h, grid, params)
    psi = solve_sensitivity(sol.u, h, np.full(grid.size, cfg.gamma), grid, params)
    _kv(lines, "sigma1_adjoint", adj.sigma1_check)
    _kv(lines, "adjoint_residual", adj.residual)
    _kv(lines, "p_sup", float(np.abs(adj.p).max()))
    write_fields(out / "fields.csv", grid, {"u": sol.u, "p": adj.p, "h": h, "psi": psi})


def _run_optimize(cfg, grid, params, out, lines):
    h0 = _initial_control(cfg, grid)
    kw = dict(omega=cfg.omega, tol=cfg.sweep_tol, maxiter=cfg.max_iter, bang_bang=cfg.bang_bang)
    try:
        res = forward_backward_sweep(h0, grid, params, **kw)
    except NotConverged as exc:
        res = exc.result
        _optimize_output(cfg, grid, params, out, lines, res)
        raise
    _optimize_output(cfg, grid, params, out, lines, res)
    for B2, pmax, scaled in adjoint_bound_trend(grid, params, cfg.B2_values, h0=h0, **kw):
        _kv(lines, f"p_sup[B2={B2:g}]", pmax)
        _kv(lines, f"B2_p_sup[B2={B2:g}]", scaled)


def _optimize_output(cfg, grid, params, out, lines, res):
    _kv(lines, "J", res.J)
    _kv(lines, "fixed_point_residual", res.fixed_point_residual)
    _kv(lines, "sweep_iterations", res.iterations)
    _kv(lines, "converged", res.converged)
    _kv(lines, "omega_final", res.omega)
    if not cfg.bang_bang:
        stat, count = stationarity_residual(res, params)
        _kv(lines, "stationarity_residual", stat)
        _kv(lines, "interior_nodes", count)
    else:
        _kv(lines, "band_nodes", res.band_nodes)
    if res.sigma1_trace:
        _kv(lines, "sigma1_adjoint", res.sigma1_trace[-1])
    write_fields(out / "fields.csv", grid, {"u": res.u_opt, "p": res.p_opt, "h": res.h_opt})
    write_trace(out / "trace.csv", res)


def _run_oracle(cfg, grid, params, out, lines):
    h, J = brute_force_oracle(cfg.partitions, cfg.level_values, grid, params)
    _kv(lines, "candidates", len(cfg.level_values) ** cfg.partitions)
    _kv(lines, "J_oracle", J)
    u = solve_state(h, grid, params).u
    write_fields(out / "fields.csv", grid, {"u": u, "h": h})


def _run_verify(cfg, grid, params, out, lines):
    rows = convergence_table(cfg.verify_ns, q=params.q)
    print(f"{'n':>6} {'max error':>24} {'order':>8}")
    for n, err, order in rows:
        print(f"{n:>6} {err:>24.17g} {order:>8.4f}")
        _kv(lines, f"error[n={n}]", err)
        if np.isfinite(order):
            _kv(lines, f"order[n={n}]", order)


def _run_wellposed(cfg, grid, params, out, lines):
    lambda1 = principal_eigenvalue(grid, params.q).sigma1
    _kv(lines, "lambda1", lambda1)
    report = wellposedness(params, lambda1)
    lines.extend(report.lines())
    _kv(lines, "wellposed", report.ok)


RUNNERS = {
    "eigen": _run_eigen,
    "state": _run_state,
    "adjoint": _run_adjoint,
    "optimize": _run_optimize,
    "oracle": _run_oracle,
    "verify": _run_verify,
    "wellposed": _run_wellposed,
}


def run(cfg, out=None):
    """Execute one configured run and return its exit code."""
    out = Path(out if out is not None else cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = [f"mode = {cfg.mode}", f"seed = {cfg.seed}"]
    for name in ("lam", "K", "c", "q", "H", "B1", "B2"):
        lines.append(f"{'lambda' if name == 'lam' else name} = {float(getattr(cfg, name))!r}")
    lines.append(f"grid = {cfg.extents} nodes {cfg.nodes}")
    code = EXIT_OK
    try:
        RUNNERS[cfg.mode](cfg, cfg.grid, cfg.params, out, lines)
        status = "ok"
    except NotConverged as exc:
        code, status = EXIT_NOT_CONVERGED, f"not_converged ({type(exc).__name__}: {exc})"
    except RegimeError as exc:
        code, status = EXIT_REGIME, f"regime_error ({type(exc).__name__}: {exc})"
    except HarvestError as exc:
        code, status = EXIT_NOT_CONVERGED, f"solver_error ({type(exc).__name__}: {exc})"
    lines.append(f"status = {status}")
    (out / "report.txt").write_text("\n".join(lines) + "\n")
    log.info("%s run finished: %s", cfg.mode, status)
    return code


def main(argv=None):
    parser = argparse.ArgumentParser(prog="grazeharvest", description="Optimal harvesting with grazing, Robin boundary.")
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", type=Path, help="key = value file; omitted keys take canonical defaults")
    parser.add_argument("--out", type=Path, default=None, help="output directory (default: config 'out' or ./out)")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--version", action="version", version=__version__)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")

    out = args.out
    try:
        text = args.config.read_text() if args.config else ""
        cfg = parse_config(text, mode=args.mode, seed=args.seed)
    except (ConfigError, OSError) as exc:
        out = Path(out or "out")
        out.mkdir(parents=True, exist_ok=True)
        key = getattr(exc, "key", None)
        status = f"config_error ({type(exc).__name__}: {exc})"
        (out / "report.txt").write_text(f"mode = {args.mode}\n" + (f"key = {key}\n" if key else "") + f"status = {status}\n")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg, out)


if __name__ == "__main__":
    sys.exit(main())

"""Manufactured-solution and eigenvalue checks for the discrete operators."""

import numpy as np
from scipy.optimize import brentq

from .eigen import robin_lambda1
from .operator import GridSpec, assemble, solve_linear

__all__ = [
    "manufactured_error",
    "convergence_table",
    "observed_orders",
    "lambda1_interval_exact",
    "lambda1_richardson",
    "SINE_1D",
    "QUADRATIC_1D",
]


def _sine(q):
    u = lambda x: np.sin(x) + 2.0  # noqa: E731
    f = lambda x: np.sin(x)  # noqa: E731
    # outward data: -u'(0) + q u(0) at the left end, u'(1) + q u(1) at the right
    g = lambda a, b: (-np.cos(a) + q * u(a), np.cos(b) + q * u(b))  # noqa: E731
    return u, f, g, 0.0


def _quadratic(q):
    u = lambda x: x**2  # noqa: E731
    f = lambda x: -2.0 + x**2  # noqa: E731
    g = lambda a, b: (-2.0 * a + q * a**2, 2.0 * b + q * b**2)  # noqa: E731
    return u, f, g, 1.0


SINE_1D = _sine
QUADRATIC_1D = _quadratic


def manufactured_error(n, q=1.0, problem=SINE_1D, extent=(0.0, 1.0)):
    """Sup-norm error of the 1D Robin solve against a manufactured solution.

    ``problem(q)`` returns (u, rhs, boundary_data, V).
    """
    grid = GridSpec.interval(n, *extent)
    u, f, g, V = problem(q)
    x = grid.coords()[0]
    ga, gb = g(*extent)
    data = np.zeros(n)
    data[0], data[-1] = ga, gb
    A = assemble(grid, q, V)
    x_num = solve_linear(A, f(x), boundary_data=data)
    return float(np.abs(x_num - u(x)).max())


def observed_orders(ns, errors):
    ns, errors = np.asarray(ns, dtype=float), np.asarray(errors, dtype=float)
    h = 1.0 / (ns - 1)
    return np.log(errors[:-1] / errors[1:]) / np.log(h[:-1] / h[1:])


def convergence_table(ns=(33, 65, 129, 257), q=1.0, problem=SINE_1D):
    """Rows (n, error, observed order or nan for the first row)."""
    errors = [manufactured_error(n, q, problem) for n in ns]
    orders = [float("nan"), *observed_orders(ns, errors)]
    return list(zip(ns, errors, orders))


def lambda1_interval_exact(q, length=1.0):
    """Principal Robin eigenvalue of -d^2/dx^2 on an interval.

    The eigenfunction is cos(w (x - mid)), and w solves w tan(w L / 2) = q.
    """
    w = brentq(lambda w: w * np.tan(0.5 * w * length) - q, 1e-14, np.pi / length * (1 - 1e-14))
    return w * w


def lambda1_richardson(n, q=1.0, extent=(0.0, 1.0)):
    """Second-order Richardson extrapolation from grids of n and (n + 1) / 2 nodes.

    Returns (extrapolated, coarse value, fine value); ``n`` must be odd.
    """
    if n % 2 == 0:
        raise ValueError("n must be odd so the coarse grid nests")
    coarse = robin_lambda1(GridSpec.interval((n + 1) // 2, *extent), q)
    fine = robin_lambda1(GridSpec.interval(n, *extent), q)
    return (4.0 * fine - coarse) / 3.0, coarse, fine

# %% [markdown]
# # Linearization: adjoint and sensitivity
#
# Both problems share the operator -d^2/dx^2 - lam f_h'(u). The adjoint has
# source h, the sensitivity in direction gamma has source -lam gamma u, and
# the discrete duality identity holds to rounding.

# %%
import numpy as np

from grazeharvest import GridSpec, ModelParams, integrate, solve_adjoint, solve_sensitivity, solve_state
from grazeharvest.adjoint import linearized_operator, sensitivity_fd_errors

params = ModelParams()
grid = GridSpec.interval(257)
rng = np.random.default_rng(2)
# stay clear of the box edges so perturbed controls remain admissible
h = rng.uniform(0.05, params.H - 0.05, grid.size)
u = solve_state(h, grid, params).u

# %%
op = linearized_operator(u, h, grid, params)
adj = solve_adjoint(u, h, grid, params, operator=op)
print(f"sigma1 of the linearized operator: {adj.sigma1_check:.3f}")
print(f"p in [{adj.p.min():.3e}, {adj.p.max():.3e}]")

# %%
for _ in range(3):
    gamma = rng.normal(size=grid.size)
    psi = solve_sensitivity(u, h, gamma, grid, params, operator=op)
    lhs = integrate(grid, psi * h)
    rhs = -params.lam * integrate(grid, gamma * u * adj.p)
    print(f"int psi h = {lhs:+.10e}   -lam int gamma u p = {rhs:+.10e}")

# %% [markdown]
# Difference quotients of the state approach psi at first order.

# %%
eps = (1e-2, 1e-3, 1e-4)
_, errs = sensitivity_fd_errors(h, rng.uniform(-1, 1, grid.size), grid, params, eps)
for e, err in zip(eps, errs):
    print(f"eps={e:.0e}  ||(u_eps - u)/eps - psi|| = {err:.3e}")
print("slope:", np.polyfit(np.log(eps), np.log(errs), 1)[0])

# %% [markdown]
# # Positive steady states
#
# -u'' = lam (u - u^2/K - c u^2/(1+u^2) - h u) with Robin ends. Monotone
# iteration from the supersolution K gives the maximal solution; starting
# from the full-effort state gives the minimal one. At lam = 500 they coincide.

# %%
import numpy as np

from grazeharvest import GridSpec, ModelParams, solve_autonomous, solve_state
from grazeharvest.errors import Extinct
from grazeharvest.eigen import robin_lambda1
from grazeharvest.model import compute_r0, wellposedness

params = ModelParams()
grid = GridSpec.interval(257)
print(params)

# %%
report = wellposedness(params, robin_lambda1(grid, params.q))
print("\n".join(report.lines()))

# %%
u0 = solve_autonomous(0.0, grid, params)
uH = solve_autonomous(params.H, grid, params)
print(f"u_0 in [{u0.u.min():.4f}, {u0.u.max():.4f}], {u0.iterations} sweeps + {u0.newton_iterations} Newton")
print(f"u_H in [{uH.u.min():.4f}, {uH.u.max():.4f}], r0(H) = {compute_r0(params.H, params):.6f}")
print("bracket K(1-H)/2 =", params.K * (1 - params.H) / 2)

# %% [markdown]
# A random control sits between the two autonomous states, and the
# maximal and minimal solves agree.

# %%
rng = np.random.default_rng(1)
h = rng.uniform(0, params.H, grid.size)
up = solve_state(h, grid, params, from_above=True)
down = solve_state(h, grid, params, from_above=False)
print("sandwiched:", bool(np.all(uH.u <= up.u + 1e-10) and np.all(up.u <= u0.u + 1e-10)))
print("max - min:", np.abs(up.u - down.u).max())
print("residual:", up.residual)

# %% [markdown]
# Below the existence threshold the population dies out.

# %%
try:
    solve_state(0.0, grid, params.replace(lam=0.1))
except Extinct as exc:
    print("extinct:", exc)

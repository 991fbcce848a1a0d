# %% [markdown]
# # Optimal harvesting effort
#
# Maximize J(h) = int h u - (B1 h + B2 h^2) over 0 <= h <= H. The optimum
# satisfies h = clip((u - lam p u - B1) / (2 B2), 0, H); a relaxed
# forward-backward sweep iterates that map.

# %%
import numpy as np

from grazeharvest import GridSpec, ModelParams, brute_force_oracle, forward_backward_sweep, gradient_check
from grazeharvest.optimize import adjoint_bound_trend, stationarity_residual

params = ModelParams()
grid = GridSpec.interval(257)

# %% [markdown]
# With the canonical costs the full effort H is optimal.

# %%
res = forward_backward_sweep(0.0, grid, params)
print(f"J* = {res.J:.10f} after {res.iterations} sweeps, h in [{res.h_opt.min()}, {res.h_opt.max()}]")
h_or, J_or = brute_force_oracle(3, [0.0, 0.15, 0.3], grid, params)
print(f"best of 27 piecewise-constant controls: J = {J_or:.10f}")

# %%
rep = gradient_check(0.15, np.random.default_rng(3).uniform(-1, 1, grid.size), grid, params)
print("adjoint gradient:", rep.analytic)
print("finite differences:", rep.finite_differences)
print("error slope:", rep.slope)

# %% [markdown]
# A stiffer quadratic cost gives an interior optimum. Different starts end
# at the same control.

# %%
p50 = params.replace(B2=50.0)
starts = {"0": 0.0, "H": p50.H, "random": np.random.default_rng(4).uniform(0, p50.H, grid.size)}
sols = {k: forward_backward_sweep(h0, grid, p50) for k, h0 in starts.items()}
for k, s in sols.items():
    print(f"start {k:6s}: J = {s.J:.10f}, {s.iterations} sweeps, h in [{s.h_opt.min():.4f}, {s.h_opt.max():.4f}]")
print("spread:", max(np.abs(a.h_opt - b.h_opt).max() for a in sols.values() for b in sols.values()))
stat, count = stationarity_residual(sols["0"], p50)
print(f"stationarity residual {stat:.2e} on {count} interior nodes")

# %%
for B2, pmax, scaled in adjoint_bound_trend(grid, params):
    print(f"B2={B2:5.1f}  ||p|| = {pmax:.3e}  B2 ||p|| = {scaled:.4f}")

# %% [markdown]
# A fixed cost above K makes harvesting unprofitable.

# %%
idle = forward_backward_sweep(0.0, grid, params.replace(B1=25.0))
print("B1 = 25:", idle.J, idle.h_opt.max())

# %% [markdown]
# # The same pipeline on a square
#
# The 2D operator is a Kronecker sum of interval operators, so the principal
# eigenvalue on a square is twice the interval value.

# %%
import numpy as np

from grazeharvest import GridSpec, ModelParams, forward_backward_sweep, principal_eigenvalue, solve_state

params = ModelParams()
square = GridSpec.rectangle(33, 33)
print("sigma1 square:", principal_eigenvalue(square, params.q).sigma1)
print("2 x interval :", 2 * principal_eigenvalue(GridSpec.interval(33), params.q).sigma1)

# %%
x, y = square.coords()
h = params.H * 0.5 * (1 + np.cos(np.pi * x) * np.cos(np.pi * y))
sol = solve_state(h, square, params)
print(f"u in [{sol.u.min():.4f}, {sol.u.max():.4f}], residual {sol.residual:.2e}")

# %%
res = forward_backward_sweep(0.0, square, params.replace(B2=50.0))
print(f"J* = {res.J:.8f} in {res.iterations} sweeps; fixed-point residual {res.fixed_point_residual:.1e}")
print(res.h_opt.reshape(square.shape)[::8, ::8].round(4))

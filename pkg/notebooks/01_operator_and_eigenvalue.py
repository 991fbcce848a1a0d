# %% [markdown]
# # The Robin Laplacian and its principal eigenvalue
#
# Finite differences on a node-centred grid, with the Robin condition
# du/dn + q u = 0 folded in through ghost nodes. We check second-order
# convergence on a manufactured solution and compare the lowest eigenvalue
# with the root of w tan(w/2) = q.

# %%
import numpy as np

from grazeharvest import GridSpec, assemble, principal_eigenvalue
from grazeharvest.verification import (
    QUADRATIC_1D,
    convergence_table,
    lambda1_interval_exact,
    lambda1_richardson,
    manufactured_error,
)

# %%
for n, err, order in convergence_table((33, 65, 129, 257)):
    print(f"n={n:4d}  error={err:.3e}  order={order:.3f}")

# quadratics are reproduced to rounding
print("quadratic error:", manufactured_error(65, problem=QUADRATIC_1D))

# %% [markdown]
# The smallest n gives a matrix small enough to read.

# %%
print(assemble(GridSpec.interval(3), q=1.0).matrix.toarray())

# %%
exact = lambda1_interval_exact(1.0)
grid = GridSpec.interval(257)
pair = principal_eigenvalue(grid, 1.0)
extrap, coarse, fine = lambda1_richardson(257)
print(f"exact root     {exact:.12f}")
print(f"n=257          {pair.sigma1:.12f}  ({pair.iterations} inverse iterations)")
print(f"extrapolated   {extrap:.12f}  error {abs(extrap - exact):.1e}")

# %% [markdown]
# A constant potential shifts the spectrum; a larger potential raises it.

# %%
rng = np.random.default_rng(0)
V = rng.uniform(-3, 3, grid.size)
base = principal_eigenvalue(grid, 1.0, V).sigma1
print("shift by 4:", principal_eigenvalue(grid, 1.0, V + 4).sigma1 - base)
print("V -> V + |noise| raises sigma1:", principal_eigenvalue(grid, 1.0, V + rng.uniform(0, 1, grid.size)).sigma1 > base)

"""Finite-difference Robin operators -Laplace + V on intervals and rectangles.

Rows of the assembled matrix are the discrete equations themselves: interior
rows use the central 3-point (1D) or 5-point (2D) stencil, boundary rows come
from eliminating a ghost node with du/dn = g - q u on each face. That matrix
is not symmetric, but ``diag(weights) @ matrix`` is, where ``weights`` are
the trapezoid quadrature weights. All inner products and integrals use the
same weights, so discrete Green identities hold exactly.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import GridTooCoarse, MaxIterations, NotPositiveDefinite

__all__ = [
    "GridSpec",
    "ScalarField",
    "ControlField",
    "DiscreteOperator",
    "assemble",
    "solve_linear",
    "integrate",
    "boundary_integral",
    "l2_norm",
]

CG_RTOL = 1e-12
LINEAR_RTOL = 1e-10


@dataclass(frozen=True)
class GridSpec:
    """Uniform tensor grid on [a, b] or [a1, b1] x [a2, b2], endpoints included."""

    extents: tuple
    nodes: tuple

    def __post_init__(self):
        extents = tuple(tuple(float(v) for v in e) for e in self.extents)
        nodes = tuple(int(n) for n in self.nodes)
        object.__setattr__(self, "extents", extents)
        object.__setattr__(self, "nodes", nodes)
        if len(extents) not in (1, 2) or len(nodes) != len(extents):
            raise ValueError("GridSpec supports 1 or 2 axes with one node count each")
        for a, b in extents:
            if not a < b:
                raise ValueError(f"empty interval [{a}, {b}]")
        if min(nodes) < 3:
            raise GridTooCoarse(f"need at least 3 nodes per axis, got {nodes}")

    @classmethod
    def interval(cls, n, a=0.0, b=1.0):
        return cls(((a, b),), (n,))

    @classmethod
    def rectangle(cls, nx, ny, xlim=(0.0, 1.0), ylim=(0.0, 1.0)):
        return cls((tuple(xlim), tuple(ylim)), (nx, ny))

    @property
    def dim(self):
        return len(self.nodes)

    @property
    def shape(self):
        return self.nodes

    @property
    def size(self):
        return int(np.prod(self.nodes))

    @property
    def spacing(self):
        return tuple((b - a) / (n - 1) for (a, b), n in zip(self.extents, self.nodes))

    @property
    def axes(self):
        return tuple(np.linspace(a, b, n) for (a, b), n in zip(self.extents, self.nodes))

    def coords(self):
        """Node coordinates, one flattened array per axis (C order)."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return tuple(m.ravel() for m in mesh)

    def axis_weights(self, axis):
        n, h = self.nodes[axis], self.spacing[axis]
        w = np.full(n, h)
        w[[0, -1]] = 0.5 * h
        return w

    @property
    def weights(self):
        """Trapezoid weights for integrals over the domain."""
        w = self.axis_weights(0)
        for ax in range(1, self.dim):
            w = np.multiply.outer(w, self.axis_weights(ax))
        return w.ravel()

    @property
    def boundary_weights(self):
        """Weights for integrals over the boundary (endpoint values in 1D,
        trapezoid along each edge in 2D; corners collect both edges)."""
        if self.dim == 1:
            w = np.zeros(self.nodes[0])
            w[[0, -1]] = 1.0
            return w
        nx, ny = self.nodes
        wx, wy = self.axis_weights(0), self.axis_weights(1)
        w = np.zeros((nx, ny))
        w[0, :] += wy
        w[-1, :] += wy
        w[:, 0] += wx
        w[:, -1] += wx
        return w.ravel()

    def boundary_mask(self):
        mask = np.zeros(self.shape, dtype=bool)
        for ax in range(self.dim):
            idx = [slice(None)] * self.dim
            idx[ax] = 0
            mask[tuple(idx)] = True
            idx[ax] = -1
            mask[tuple(idx)] = True
        return mask.ravel()

    def field(self, values):
        return ScalarField(self, values)


@dataclass
class ScalarField:
    """Nodal values of a function on a grid."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 0:
            v = np.full(self.grid.size, float(v))
        v = v.ravel()
        if v.size != self.grid.size:
            raise ValueError(f"field has {v.size} values, grid has {self.grid.size} nodes")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        self.values = v

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self):
        return self.values.size


@dataclass
class ControlField(ScalarField):
    """A harvesting effort with 0 <= h <= H at every node."""

    H: float = 1.0
    atol: float = field(default=1e-12, repr=False)

    def __post_init__(self):
        super().__post_init__()
        lo, hi = self.values.min(), self.values.max()
        if lo < -self.atol or hi > self.H + self.atol:
            raise ValueError(f"control leaves [0, {self.H}]: range [{lo}, {hi}]")
        self.values = np.clip(self.values, 0.0, self.H)


def _robin_1d(n, h, q):
    main = np.full(n, 2.0 / h**2)
    main[[0, -1]] += 2.0 * q / h
    upper = np.full(n - 1, -1.0 / h**2)
    lower = upper.copy()
    upper[0] = -2.0 / h**2
    lower[-1] = -2.0 / h**2
    return sp.diags([lower, main, upper], [-1, 0, 1], format="csr")


@dataclass
class DiscreteOperator:
    """-Laplace + V with homogeneous Robin rows; ``matrix`` acts on nodal values."""

    grid: GridSpec
    potential: np.ndarray
    q: float
    matrix: sp.csr_matrix
    _lu: object = field(default=None, repr=False, compare=False)

    @property
    def weights(self):
        return self.grid.weights

    def symmetric(self):
        """diag(weights) @ matrix: the symmetric (stiffness) form."""
        return sp.diags(self.weights) @ self.matrix

    def apply(self, x):
        return self.matrix @ np.asarray(x, dtype=float)

    def inner(self, x, y):
        return float(np.sum(self.weights * x * y))

    def rayleigh(self, x):
        """Discrete (int |grad x|^2 + int V x^2 + int_bdry q x^2) / int x^2."""
        x = np.asarray(x, dtype=float)
        return self.inner(self.apply(x), x) / self.inner(x, x)

    def shifted(self, shift):
        """Same operator with V replaced by V + shift."""
        return assemble(self.grid, self.q, self.potential + shift)

    def lu(self):
        if self._lu is None:
            self._lu = splu(self.matrix.tocsc())
        return self._lu


def assemble(grid, q, V=None):
    """Assemble -Laplace + V with the Robin condition du/dn + q u = 0."""
    if min(grid.nodes) < 3:
        raise GridTooCoarse(f"need at least 3 nodes per axis, got {grid.nodes}")
    if V is None:
        V = np.zeros(grid.size)
    V = np.asarray(V, dtype=float)
    if V.ndim == 0:
        V = np.full(grid.size, float(V))
    if V.size != grid.size:
        raise ValueError("potential does not match grid")
    blocks = [_robin_1d(n, h, q) for n, h in zip(grid.nodes, grid.spacing)]
    if grid.dim == 1:
        lap = blocks[0]
    else:
        nx, ny = grid.nodes
        lap = sp.kron(blocks[0], sp.identity(ny)) + sp.kron(sp.identity(nx), blocks[1])
    A = (lap + sp.diags(V)).tocsr()
    return DiscreteOperator(grid=grid, potential=V.copy(), q=q, matrix=A)


def _boundary_rhs(grid, boundary_data):
    """Right-hand-side contribution of inhomogeneous Robin data du/dn + q u = g.

    ``boundary_data`` is either an array over all nodes (g read on every face
    the node lies on) or a dict {(axis, side): array over all nodes} with
    side 0 for the lower face and 1 for the upper one.
    """
    out = np.zeros(grid.shape)
    if isinstance(boundary_data, dict):
        faces = {k: np.asarray(v, dtype=float).reshape(grid.shape) for k, v in boundary_data.items()}
    else:
        g = np.asarray(boundary_data, dtype=float).reshape(grid.shape)
        faces = {(ax, side): g for ax in range(grid.dim) for side in (0, 1)}
    for (ax, side), g in faces.items():
        idx = [slice(None)] * grid.dim
        idx[ax] = 0 if side == 0 else -1
        idx = tuple(idx)
        out[idx] += 2.0 * g[idx] / grid.spacing[ax]
    return out.ravel()


def _pcg(S, b, rtol=CG_RTOL, maxiter=None):
    """Jacobi-preconditioned CG that stops on nonpositive curvature."""
    n = b.size
    maxiter = maxiter or 10 * n
    dinv = 1.0 / S.diagonal()
    x = np.zeros(n)
    r = b.copy()
    bnorm = np.linalg.norm(b)
    z = dinv * r
    d = z.copy()
    rz = r @ z
    for _ in range(maxiter):
        if np.linalg.norm(r) <= rtol * bnorm:
            return x
        Sd = S @ d
        curv = d @ Sd
        if curv <= 0:
            raise NotPositiveDefinite("CG met nonpositive curvature; operator is not positive definite")
        alpha = rz / curv
        x += alpha * d
        r -= alpha * Sd
        z = dinv * r
        rz_new = r @ z
        d = z + (rz_new / rz) * d
        rz = rz_new
    if np.linalg.norm(r) <= rtol * bnorm:
        return x
    raise MaxIterations(f"CG did not reach rtol={rtol} in {maxiter} iterations")


def solve_linear(A, rhs, boundary_data=None):
    """Solve A x = rhs (+ Robin data) and return the nodal solution.

    1D problems use a sparse LU of the tridiagonal matrix; 2D problems use
    Jacobi-preconditioned CG on the symmetric form.
    """
    b = np.array(rhs, dtype=float).ravel()
    if b.size != A.grid.size:
        raise ValueError("right-hand side does not match grid")
    if boundary_data is not None:
        b = b + _boundary_rhs(A.grid, boundary_data)
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return np.zeros_like(b)
    if A.grid.dim == 1:
        x = A.lu().solve(b)
    else:
        x = _pcg(A.symmetric().tocsr(), A.weights * b)
    res = np.linalg.norm(A.matrix @ x - b)
    # residuals below the rounding level of |A||x| are not measurable
    floor = 16 * np.finfo(float).eps * np.linalg.norm(abs(A.matrix) @ abs(x))
    if not np.isfinite(res) or res > max(LINEAR_RTOL * bnorm, floor):
        raise MaxIterations(f"linear solve relative residual {res / bnorm:.3e} exceeds {LINEAR_RTOL}")
    return x


def integrate(grid, values):
    return float(np.sum(grid.weights * np.asarray(values, dtype=float)))


def boundary_integral(grid, values):
    return float(np.sum(grid.boundary_weights * np.asarray(values, dtype=float)))


def l2_norm(grid, values):
    v = np.asarray(values, dtype=float)
    return float(np.sqrt(np.sum(grid.weights * v * v)))

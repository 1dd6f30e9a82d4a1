"""Shared helpers for the test suite."""
import numpy as np


def random_integer_matrix(rng, max_dim=5, lo=-2, hi=2):
    """Nonzero random integer matrix with dims uniform on 1..max_dim."""
    while True:
        rows = rng.integers(1, max_dim + 1)
        cols = rng.integers(1, max_dim + 1)
        A = rng.integers(lo, hi + 1, size=(rows, cols))
        if np.any(A):
            return A


def random_psd(rng, n, rank=None, scale=1.0):
    """Random PSD matrix B^T B with controllable rank."""
    r = rank if rank is not None else n
    B = rng.normal(size=(r, n)) * scale
    return B.T @ B


def grid_max_coordinate(G, index, hi, steps=160):
    """Brute-force max of h[index] over {h >= 0, h^T G h <= 1} on a grid.

    `hi` bounds the search box; pass a scalar or one bound per coordinate
    (the box must contain the whole feasible set, not just the target
    coordinate's range).
    """
    n = G.shape[0]
    his = np.broadcast_to(np.asarray(hi, dtype=float), (n,))
    axes = [np.linspace(0.0, h, steps) for h in his]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    quad = np.einsum("ti,ij,tj->t", mesh, G, mesh)
    feas = mesh[quad <= 1.0]
    return float(np.max(feas[:, index]))


def grid_min_unit_quadratic(G, steps=400):
    """Brute-force min of z^T G z over the nonnegative unit sphere (n <= 4)."""
    n = G.shape[0]
    rng = np.random.default_rng(0)
    z = np.abs(rng.normal(size=(steps * steps, n)))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    # include the axes and uniform direction explicitly
    extra = np.vstack([np.eye(n), np.ones((1, n)) / np.sqrt(n)])
    z = np.vstack([z, extra])
    vals = np.einsum("ti,ij,tj->t", z, G, z)
    return float(np.min(vals))

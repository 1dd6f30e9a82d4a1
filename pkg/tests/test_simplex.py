"""Feasibility solver tests, cross-checked against scipy.optimize.linprog."""
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from owccover.simplex import (
    DimensionError,
    kernel_nonneg_witness,
    rowspace_nonneg_witness,
    solve_feasibility,
)


def test_solve_feasibility_basic_exact():
    # x1 + x2 = 2, x1 - x2 = 0 -> x = (1, 1)
    x = solve_feasibility([[1, 1], [1, -1]], [2, 0])
    assert x == [Fraction(1), Fraction(1)]


def test_solve_feasibility_infeasible():
    # x1 + x2 = -1 with x >= 0 is impossible
    assert solve_feasibility([[1, 1]], [-1]) is None


def test_solve_feasibility_degenerate_rhs():
    x = solve_feasibility([[1, -1]], [0])
    assert x is not None
    assert x[0] - x[1] == 0


def test_rowspace_witness_simple():
    # rowspace of [1, 1] holds (1, 1): both coordinates coverable
    u = rowspace_nonneg_witness([[1, 1]], 0)
    assert u is not None
    assert u[0] >= 1 and u[1] >= 0
    # rowspace of [1, -1] holds no nonnegative vector with a positive entry
    assert rowspace_nonneg_witness([[1, -1]], 0) is None
    assert rowspace_nonneg_witness([[1, -1]], 1) is None


def test_kernel_witness_simple():
    h = kernel_nonneg_witness([[1, -1]], 0)
    assert h is not None
    assert h[0] == h[1] and h[0] >= 1
    assert kernel_nonneg_witness([[1, 0], [0, 1]], 0) is None


def test_dimension_cap():
    wide = [[1] * 40]
    with pytest.raises(DimensionError):
        rowspace_nonneg_witness(wide, 0)


def _oracle_rowspace_feasible(A, i):
    """scipy oracle: exists v with A^T v >= 0 and (A^T v)_i >= 1."""
    A = np.asarray(A, dtype=float)
    m, n = A.shape
    # minimize 0 subject to -A^T v <= -e_i-ish bounds via linprog
    G = -A.T  # rows: -(A^T v)_j <= 0 ; for j = i: <= -1
    hvec = np.zeros(n)
    hvec[i] = -1.0
    res = linprog(
        c=np.zeros(m), A_ub=G, b_ub=hvec, bounds=[(None, None)] * m,
        method="highs",
    )
    return res.status == 0


def _oracle_kernel_feasible(A, i):
    """scipy oracle: exists h >= 0 with A h = 0, h_i >= 1."""
    A = np.asarray(A, dtype=float)
    m, n = A.shape
    bounds = [(0, None)] * n
    bounds[i] = (1, None)
    res = linprog(
        c=np.zeros(n), A_eq=A, b_eq=np.zeros(m), bounds=bounds, method="highs"
    )
    return res.status == 0


@pytest.mark.parametrize("seed", range(8))
def test_witnesses_match_scipy_oracle(seed):
    rng = np.random.default_rng(seed)
    for _ in range(40):
        rows = rng.integers(1, 5)
        cols = rng.integers(1, 5)
        A = rng.integers(-2, 3, size=(rows, cols))
        if not np.any(A):
            continue
        for i in range(cols):
            mine = rowspace_nonneg_witness(A.tolist(), i) is not None
            assert mine == _oracle_rowspace_feasible(A, i)
            mine_k = kernel_nonneg_witness(A.tolist(), i) is not None
            assert mine_k == _oracle_kernel_feasible(A, i)


def test_witness_values_verify():
    rng = np.random.default_rng(7)
    for _ in range(60):
        A = rng.integers(-2, 3, size=(rng.integers(1, 5), rng.integers(1, 5)))
        if not np.any(A):
            continue
        n = A.shape[1]
        for i in range(n):
            u = rowspace_nonneg_witness(A.tolist(), i)
            if u is not None:
                assert all(v >= 0 for v in u)
                assert u[i] >= 1
            h = kernel_nonneg_witness(A.tolist(), i)
            if h is not None:
                assert all(v >= 0 for v in h)
                assert h[i] >= 1
                prod = [sum(A[r][c] * h[c] for c in range(n)) for r in range(A.shape[0])]
                assert all(v == 0 for v in prod)

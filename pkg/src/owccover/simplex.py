"""Self-contained linear-programming feasibility via phase-1 simplex.

Solves "find x >= 0 with M x = b" exactly (fractions.Fraction) or in floating
point with a sign tolerance.  Bland's rule is used throughout, so the solver
cannot cycle.  This is deliberately dependency-free: cover-order decisions are
sign-driven and exactness removes flakiness on integer inputs.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

MAX_DIMENSION = 32


class DimensionError(ValueError):
    """Input exceeds the supported problem size."""


def _as_rows(matrix) -> list[list]:
    return [list(row) for row in matrix]


def solve_feasibility(
    rows: Sequence[Sequence], rhs: Sequence, tol: float = 0.0
) -> Optional[list]:
    """Find x >= 0 with M x = b, or None when infeasible.

    `rows`/`rhs` may hold Fractions or ints (tol must then be 0, arithmetic is
    exact) or floats (tol > 0 gives the pivot/zero threshold).
    """
    m = len(rows)
    if m == 0:
        return []
    n = len(rows[0])
    if n > 4 * MAX_DIMENSION + 8:
        raise DimensionError(f"feasibility problem too large ({n} columns)")

    exact = tol == 0
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0

    def conv(v):
        return Fraction(v) if exact else float(v)

    # Tableau: n structural columns, m artificial columns, RHS.  Flip rows so
    # the RHS is nonnegative, then start from the all-artificial basis.
    tab = []
    for i in range(m):
        row = [conv(v) for v in rows[i]] + [zero] * m + [conv(rhs[i])]
        if row[-1] < zero:
            row = [-v for v in row]
        row[n + i] = one
        tab.append(row)
    basis = [n + i for i in range(m)]

    # Phase-1 objective: minimize the sum of artificials.  Keep the reduced
    # cost row z = sum of basic (artificial) rows.
    width = n + m + 1
    obj = [zero] * width
    for row in tab:
        for j in range(width):
            obj[j] += row[j]

    def is_pos(v):
        return v > tol if not exact else v > 0

    while True:
        # Bland: entering column = lowest index with positive objective entry
        # (decreasing the artificial sum), artificials excluded.
        enter = -1
        for j in range(n):
            if is_pos(obj[j]):
                enter = j
                break
        if enter < 0:
            break
        # Ratio test, ties broken by lowest basis index (Bland).
        leave = -1
        best = None
        for i in range(m):
            a = tab[i][enter]
            if is_pos(a):
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            # Unbounded direction in phase 1 cannot happen (objective is
            # bounded below by 0); treat defensively as stalled.
            break
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave:
                f = tab[i][enter]
                if f != zero:
                    tab[i] = [v - f * p for v, p in zip(tab[i], tab[leave])]
        f = obj[enter]
        if f != zero:
            obj = [v - f * p for v, p in zip(obj, tab[leave])]
        basis[leave] = enter

    residual = obj[-1]
    feas_tol = 0 if exact else max(tol, 1e-9)
    if residual > feas_tol:
        return None
    x = [zero] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = tab[i][-1]
    return x


def rowspace_nonneg_witness(
    matrix, index: int, tol: float = 0.0
) -> Optional[list]:
    """Vector u in rowspace(M) with u >= 0 and u[index] >= 1, or None.

    Built as u = M^T v with free v; the returned u is the structural slack
    solution, exact in Fraction mode.
    """
    rows = _as_rows(matrix)
    m = len(rows)
    n = len(rows[0]) if m else 0
    if not 0 <= index < n:
        raise IndexError(f"column index {index} out of range for width {n}")
    if n > MAX_DIMENSION:
        raise DimensionError(f"dimension {n} exceeds cap {MAX_DIMENSION}")
    # Equations over x = [v+, v-, s]: for each coordinate j,
    #   (M^T (v+ - v-))_j - s_j = (1 if j == index else 0),
    # with s_j >= 0 playing the role of u_j (u_index >= 1 via the RHS shift).
    eq_rows = []
    rhs = []
    for j in range(n):
        row = [rows[i][j] for i in range(m)]
        row += [-rows[i][j] for i in range(m)]
        slack = [0] * n
        slack[j] = -1
        eq_rows.append(row + slack)
        rhs.append(1 if j == index else 0)
    x = solve_feasibility(eq_rows, rhs, tol)
    if x is None:
        return None
    v = [x[i] - x[m + i] for i in range(m)]
    u = []
    for j in range(n):
        u.append(sum(rows[i][j] * v[i] for i in range(m)))
    return u


def kernel_nonneg_witness(matrix, index: int, tol: float = 0.0) -> Optional[list]:
    """Vector h >= 0 with M h = 0 and h[index] >= 1, or None."""
    rows = _as_rows(matrix)
    m = len(rows)
    n = len(rows[0]) if m else 0
    if not 0 <= index < n:
        raise IndexError(f"column index {index} out of range for width {n}")
    if n > MAX_DIMENSION:
        raise DimensionError(f"dimension {n} exceeds cap {MAX_DIMENSION}")
    # Variables [h, t]: M h = 0 and h[index] - t = 1.
    eq_rows = [list(rows[i]) + [0] for i in range(m)]
    rhs = [0] * m
    pick = [0] * (n + 1)
    pick[index] = 1
    pick[n] = -1
    eq_rows.append(pick)
    rhs.append(1)
    x = solve_feasibility(eq_rows, rhs, tol)
    if x is None:
        return None
    return x[:n]

"""Super-rectangular cover analysis of PSD Gram matrices.

For a coding-difference Gram matrix G = A^T A, the feasible channel set
{h >= 0 : h^T G h <= tau^2} is boxed coordinate-by-coordinate.  A coordinate
is *covered* when it is confined to a finite interval for every tau; the
number of covered coordinates is the cover order, the minimal box sides are
the cover lengths.  Full cover is equivalent to unique identifiability of the
matrix signal over nonnegative channels.

Two independent decision paths are provided and must agree:

* the per-index LP path: coordinate i is covered iff the row space of A
  contains a nonnegative vector with i-th entry >= 1 (sums of per-index
  witnesses are joint witnesses, so the per-index union is the cover link);
* the echelon / positive-row-transformation path, which reduces A to
  [I | C] form and makes trailing columns nonnegative by adding positive
  multiples of rows, falling back to the orthogonal-complement (kernel
  witness) characterization for the stuck cases the sweep cannot resolve.

Arithmetic is exact (fractions) whenever the input is integer/rational;
otherwise floating point with a sign tolerance of 1e-9 times the matrix
scale.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .simplex import (
    MAX_DIMENSION,
    DimensionError,
    kernel_nonneg_witness,
    rowspace_nonneg_witness,
)

SIGN_TOL = 1e-9
MAX_LENGTH_DIMENSION = 12

__all__ = [
    "GramMatrix",
    "CoverReport",
    "CoverInconsistencyError",
    "coverable_index",
    "cover_order",
    "cover_order_echelon",
    "nonneg_kernel_witness",
    "is_full_cover",
    "cover_lengths",
    "cover_volume",
    "min_unit_quadratic",
    "cover_report",
]


class CoverInconsistencyError(RuntimeError):
    """A covered index produced no finite cover length."""


# ---------------------------------------------------------------------------
# input handling


def _validate_matrix(M) -> np.ndarray:
    arr = np.asarray(M, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError("matrix has zero dimension")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    if not np.any(arr):
        raise ValueError("matrix is identically zero")
    if arr.shape[1] > MAX_DIMENSION:
        raise DimensionError(
            f"dimension {arr.shape[1]} exceeds cap {MAX_DIMENSION}"
        )
    return arr


_EXACT_DENOM_CAP = 1 << 16


def _exact_rows(M) -> Optional[list[list[Fraction]]]:
    """Fraction rows when every entry is an integer or a small-denominator
    binary rational, else None (floating-point mode)."""
    rows = []
    for row in M:
        out = []
        for v in row:
            if isinstance(v, Fraction):
                out.append(v)
            elif isinstance(v, (int, np.integer)):
                out.append(Fraction(int(v)))
            elif isinstance(v, (float, np.floating)):
                f = Fraction(float(v))
                if f.denominator > _EXACT_DENOM_CAP:
                    return None
                out.append(f)
            else:
                return None
        rows.append(out)
    return rows


def _prepare(M):
    """Validated float array, exact rows (or None) and the sign tolerance."""
    arr = _validate_matrix(M)
    source = M.tolist() if isinstance(M, np.ndarray) else M
    exact = _exact_rows(source)
    if exact is not None:
        return arr, exact, 0.0
    scale = float(np.max(np.abs(arr)))
    return arr, None, SIGN_TOL * scale


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class GramMatrix:
    """An N x N PSD matrix G = A^T A with an optional factor A kept around.

    Immutable after construction; safe to share across threads.
    """

    entries: np.ndarray
    source: Optional[np.ndarray] = None

    def __post_init__(self):
        arr = _validate_matrix(self.entries)
        object.__setattr__(self, "entries", arr)
        n = arr.shape[0]
        if arr.shape[1] != n:
            raise ValueError(f"Gram matrix must be square, got {arr.shape}")
        scale = max(1.0, float(np.max(np.abs(arr))))
        if np.max(np.abs(arr - arr.T)) > 1e-12 * scale:
            raise ValueError("Gram matrix is not symmetric within 1e-12")
        eigs = np.linalg.eigvalsh(arr)
        if eigs[0] < -1e-9 * max(eigs[-1], 0.0) - 1e-15:
            raise ValueError(f"Gram matrix is not PSD (min eigenvalue {eigs[0]})")
        if self.source is not None:
            src = _validate_matrix(self.source)
            if src.shape[1] != n:
                raise ValueError("factor width does not match Gram dimension")
            if np.max(np.abs(src.T @ src - arr)) > 1e-9 * scale:
                raise ValueError("factor does not reproduce the Gram matrix")
            object.__setattr__(self, "source", src)

    @classmethod
    def from_factor(cls, A) -> "GramMatrix":
        arr = _validate_matrix(A)
        exact = _exact_rows(A.tolist() if isinstance(A, np.ndarray) else A)
        if exact is not None:
            n = arr.shape[1]
            gram = [
                [sum(r[i] * r[j] for r in exact) for j in range(n)]
                for i in range(n)
            ]
            g = np.array([[float(v) for v in row] for row in gram])
        else:
            g = arr.T @ arr
        return cls(entries=g, source=arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def analysis_matrix(self) -> np.ndarray:
        """Matrix whose row space / kernel carry the cover structure.

        rowspace(A^T A) = rowspace(A) and ker(A^T A) = ker(A), so G itself
        serves when no factor is available.
        """
        return self.source if self.source is not None else self.entries


def _as_analysis_matrix(M) -> np.ndarray:
    if isinstance(M, GramMatrix):
        return M.analysis_matrix()
    return np.asarray(M, dtype=float)


def _as_gram(M) -> GramMatrix:
    if isinstance(M, GramMatrix):
        return M
    arr = np.asarray(M, dtype=float)
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1] and np.allclose(arr, arr.T):
        return GramMatrix(entries=arr)
    return GramMatrix.from_factor(arr)


@dataclass(frozen=True)
class CoverReport:
    """Cover order, the unique longest cover link, per-index lengths and the
    cover volume (product over covered indices; empty product is 1)."""

    cover_order: int
    cover_link: tuple[int, ...]
    cover_lengths: tuple[float, ...]
    cover_volume: float

    @property
    def full_cover(self) -> bool:
        return self.cover_order == len(self.cover_lengths)

    def as_text(self) -> str:
        lines = [
            f"cover_order = {self.cover_order}",
            f"full_cover = {str(self.full_cover).lower()}",
            "cover_link = " + ",".join(str(i) for i in self.cover_link),
            "cover_lengths = "
            + ",".join(
                "inf" if math.isinf(c) else f"{c:.12g}" for c in self.cover_lengths
            ),
            f"cover_volume = {self.cover_volume:.12g}",
        ]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# per-index LP path


def coverable_index(A, index: int) -> bool:
    """True iff rowspace(A) holds a nonnegative vector positive at `index`."""
    arr = _as_analysis_matrix(A)
    _, exact, tol = _prepare(arr)
    rows = exact if exact is not None else arr.tolist()
    if not 0 <= index < arr.shape[1]:
        raise ValueError(
            f"index {index} out of range for dimension {arr.shape[1]}"
        )
    return rowspace_nonneg_witness(rows, index, tol) is not None


def cover_order(A) -> tuple[int, tuple[int, ...]]:
    """(R_c, cover link) via the per-index LP path.

    A sum of per-index witnesses is a joint witness, so the set of
    individually coverable indices is exactly the unique longest cover link.
    """
    arr = _as_analysis_matrix(A)
    _, exact, tol = _prepare(arr)
    rows = exact if exact is not None else arr.tolist()
    n = arr.shape[1]
    link = []
    for i in range(n):
        # A coordinate identically zero on the row space can never be covered.
        if exact is not None:
            if all(r[i] == 0 for r in rows):
                continue
        elif not np.any(np.abs(arr[:, i]) > tol):
            continue
        if rowspace_nonneg_witness(rows, i, tol) is not None:
            link.append(i)
    return len(link), tuple(link)


def is_full_cover(G) -> bool:
    gram = _as_gram(G)
    order, _ = cover_order(gram)
    return order == gram.n


def nonneg_kernel_witness(A) -> Optional[np.ndarray]:
    """Nonzero h >= 0 with A h = 0 (maximal support), or None if none exists.

    None exactly when the Gram of A has full cover (identifiability
    equivalence); otherwise the support of the returned witness is the
    complement of the cover link.
    """
    arr = _as_analysis_matrix(A)
    _, exact, tol = _prepare(arr)
    rows = exact if exact is not None else arr.tolist()
    n = arr.shape[1]
    total = None
    for i in range(n):
        h = kernel_nonneg_witness(rows, i, tol)
        if h is None:
            continue
        if total is None:
            total = h
        else:
            total = [a + b for a, b in zip(total, h)]
    if total is None:
        return None
    out = np.array([float(v) for v in total])
    return out / np.max(out)


# ---------------------------------------------------------------------------
# echelon / positive-transformation path


def _rref(rows, cols, zero):
    """Reduced row echelon of `rows` over active coordinates `cols`.

    Returns (new_rows, pivots) with pivots as coordinate ids; zero rows are
    dropped.  Column handling follows the natural coordinate order (the
    column permutation of the textbook echelon form is implicit in `pivots`).
    """
    work = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in cols:
        if r >= len(work):
            break
        pick = None
        best = None
        for i in range(r, len(work)):
            v = work[i][c]
            if not zero(v):
                mag = abs(v)
                if best is None or mag > best:
                    best = mag
                    pick = i
        if pick is None:
            continue
        work[r], work[pick] = work[pick], work[r]
        piv = work[r][c]
        work[r] = [v / piv for v in work[r]]
        for i in range(len(work)):
            if i != r:
                f = work[i][c]
                if not zero(f):
                    work[i] = [a - f * b for a, b in zip(work[i], work[r])]
                work[i][c] = work[i][c] * 0  # keep exact zeros in column c
        pivots.append(c)
        r += 1
    return [row for row in work[:r]], pivots


def _greedy_positive_sweep(rows, order, pos, neg):
    """Make trailing columns nonnegative by adding positive row multiples.

    Mutates `rows`.  Returns the first column that gets stuck with only
    nonpositive entries (and at least one negative), or None on success.
    """
    for c in order:
        col = [row[c] for row in rows]
        negs = [i for i, v in enumerate(col) if neg(v)]
        if not negs:
            continue
        srcs = [i for i, v in enumerate(col) if pos(v)]
        if not srcs:
            return c
        s = srcs[0]
        src = rows[s]
        for j in negs:
            f = -rows[j][c] / src[c]
            rows[j] = [a + f * b for a, b in zip(rows[j], src)]
            rows[j][c] = rows[j][c] * 0
    return None


def cover_order_echelon(A) -> tuple[int, tuple[int, ...]]:
    """(R_c, cover link) via the echelon / positive-transformation path.

    Must agree with :func:`cover_order` on every input; the acceptance suite
    cross-checks this together with the kernel-witness verdict.
    """
    arr = _as_analysis_matrix(A)
    _, exact, tol = _prepare(arr)
    if exact is not None:
        rows = exact
        zero = lambda v: v == 0
        pos = lambda v: v > 0
        neg = lambda v: v < 0
    else:
        scale = float(np.max(np.abs(arr)))
        rows = (arr / scale).tolist()
        t = SIGN_TOL
        zero = lambda v: abs(v) <= t
        pos = lambda v: v > t
        neg = lambda v: v < -t

    n = arr.shape[1]
    active = list(range(n))
    basis = [list(r) for r in rows]

    while True:
        basis, pivots = _rref(basis, active, zero)
        if not basis:
            return 0, ()
        trailing = [c for c in active if c not in pivots]

        # Identically-zero trailing columns never host a positive entry.
        dead = [c for c in trailing if all(zero(row[c]) for row in basis)]
        if dead:
            active = [c for c in active if c not in dead]
            trailing = [c for c in trailing if c not in dead]

        # Fresh elimination: an all-nonpositive trailing column forces its
        # coordinate to zero on every nonnegative row-space vector, and the
        # pivot rows carrying its negative entries drop out with it.
        elim = None
        for c in trailing:
            col = [row[c] for row in basis]
            if any(neg(v) for v in col) and not any(pos(v) for v in col):
                elim = c
                break
        if elim is not None:
            bad_rows = [i for i, row in enumerate(basis) if neg(row[elim])]
            bad_coords = {pivots[i] for i in bad_rows} | {elim}
            basis = [row for i, row in enumerate(basis) if i not in bad_rows]
            active = [c for c in active if c not in bad_coords]
            if not basis or not active:
                return 0, ()
            continue

        # Greedy sweep with promote-on-stuck restarts.
        order = list(trailing)
        promoted: set[int] = set()
        while True:
            work = [list(row) for row in basis]
            stuck = _greedy_positive_sweep(work, order, pos, neg)
            if stuck is None:
                # Sum of rows witnesses every active coordinate at once.
                return len(active), tuple(sorted(active))
            if stuck in promoted:
                break
            promoted.add(stuck)
            order = [stuck] + [c for c in order if c != stuck]

        # The positive-transformation mechanics cannot settle this instance;
        # decide the remaining coordinates through the orthogonal complement
        # (a coordinate is uncovered iff a nonnegative kernel vector is
        # positive there).
        link = []
        for c in active:
            packed = [[row[c2] for c2 in active] for row in basis]
            idx = active.index(c)
            if kernel_nonneg_witness(packed, idx, tol) is None:
                link.append(c)
        return len(link), tuple(sorted(link))


# ---------------------------------------------------------------------------
# cover lengths and the coding-gain constant


def _covered_max(gram: np.ndarray, index: int) -> float:
    """max h_index over {h >= 0, h^T G h <= 1} by active-set enumeration."""
    n = gram.shape[0]
    others = [j for j in range(n) if j != index]
    best = None
    scale = max(1.0, float(np.max(np.abs(gram))))
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            S = (index,) + combo
            sub = gram[np.ix_(S, S)]
            eigs = np.linalg.eigvalsh(sub)
            if eigs[0] <= 1e-10 * scale:
                continue  # singular face: skipped, grid fallback if needed
            e = np.zeros(len(S))
            e[0] = 1.0
            w = np.linalg.solve(sub, e)
            val = w[0]
            if val <= 0:
                continue
            if np.min(w) < -1e-12 * max(1.0, np.max(np.abs(w))):
                continue  # maximizer leaves the nonnegative orthant
            cand = math.sqrt(val)
            if best is None or cand > best:
                best = cand
    return best if best is not None else math.nan


def _grid_max(gram: np.ndarray, index: int, steps: int = 60) -> float:
    """Dense-grid fallback for max h_index on {h >= 0, h^T G h <= 1}."""
    n = gram.shape[0]
    if n > 4:
        raise CoverInconsistencyError(
            "grid fallback limited to n <= 4; enumeration produced no "
            f"finite cover length for covered index {index}"
        )
    hi = 1.0 / math.sqrt(gram[index, index]) * 4.0
    axes = [np.linspace(0.0, hi, steps)] * n
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    quad = np.einsum("ti,ij,tj->t", mesh, gram, mesh)
    ok = mesh[quad <= 1.0 + 1e-12]
    if len(ok) == 0:
        raise CoverInconsistencyError("grid fallback found no feasible point")
    return float(np.max(ok[:, index]))


def cover_lengths(G) -> np.ndarray:
    """Per-index cover lengths c_i (tau = 1); uncovered indices are inf.

    Covered index: c_i = max{h_i : h >= 0, h^T G h <= 1}, found by
    enumerating coordinate supports with nonsingular principal submatrices
    and accepting the face maximizer G_SS^{-1} e_i when it is nonnegative.
    Reproduces the closed forms 1/sqrt(G_ii) (all entries nonnegative) and
    sqrt([G^{-1}]_ii) (2x2 full rank, nonpositive off-diagonal).
    """
    gram = _as_gram(G)
    n = gram.n
    if n > MAX_LENGTH_DIMENSION:
        raise DimensionError(
            f"cover_lengths enumeration capped at n <= {MAX_LENGTH_DIMENSION}"
        )
    _, link = cover_order(gram)
    out = np.full(n, math.inf)
    for i in link:
        c = _covered_max(gram.entries, i)
        if math.isnan(c):
            warnings.warn(
                f"active-set enumeration found no candidate for covered index "
                f"{i}; falling back to dense-grid maximization",
                RuntimeWarning,
                stacklevel=2,
            )
            c = _grid_max(gram.entries, i)
        if not math.isfinite(c):
            raise CoverInconsistencyError(
                f"covered index {i} produced a non-finite cover length"
            )
        out[i] = c
    return out


def cover_volume(lengths: Sequence[float]) -> float:
    """Product of the finite cover lengths (empty product is 1)."""
    vol = 1.0
    for c in lengths:
        if math.isfinite(c):
            vol *= c
    return vol


def min_unit_quadratic(G) -> float:
    """C_min = min z^T G z over the nonnegative unit sphere (full cover only).

    Complete support enumeration: restricted to its positive support, a KKT
    minimizer is a nonnegative eigenvector of the principal submatrix, and
    every such eigenpair is a feasible point, so the minimum over accepted
    eigenvalues is exact up to eigensolver accuracy.
    """
    gram = _as_gram(G)
    n = gram.n
    if n > MAX_LENGTH_DIMENSION:
        raise DimensionError(
            f"min_unit_quadratic enumeration capped at n <= {MAX_LENGTH_DIMENSION}"
        )
    if not is_full_cover(gram):
        raise ValueError("C_min is zero: the Gram matrix does not have full cover")
    best = math.inf
    g = gram.entries
    for r in range(1, n + 1):
        for S in itertools.combinations(range(n), r):
            sub = g[np.ix_(S, S)]
            vals, vecs = np.linalg.eigh(sub)
            for k in range(len(S)):
                v = vecs[:, k]
                if np.max(np.abs(v)) <= 0:
                    continue
                if v[int(np.argmax(np.abs(v)))] < 0:
                    v = -v
                if np.min(v) >= -1e-9:
                    best = min(best, float(vals[k]))
    if not math.isfinite(best) or best <= 0:
        raise CoverInconsistencyError(
            "no nonnegative eigen-restriction found for a full-cover matrix"
        )
    return best


def cover_report(G) -> CoverReport:
    """Full cover diagnostics for a Gram matrix."""
    gram = _as_gram(G)
    order, link = cover_order(gram)
    lengths = cover_lengths(gram)
    return CoverReport(
        cover_order=order,
        cover_link=link,
        cover_lengths=tuple(float(c) for c in lengths),
        cover_volume=cover_volume(lengths),
    )

"""Nonnegative multidimensional constellations with unit minimum distance.

Two families:

* integer-shell ("Diophantine") constellations: unions of the shells
  { (n/floor(sqrt(L))) * 1 + x : x in N^L, 1^T x = q } collected in order of
  total optical power, which guarantees a minimum Euclidean distance of
  exactly 1;
* per-dimension PAM products, the conventional baseline.

All coordinates are dyadic rationals at the supported sizes (L <= 8 keeps the
shift grid at halves), so float arithmetic on them is exact; exact Fractions
are kept for powers and point values.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

MAX_L = 8
MAX_K = 12


@dataclass(frozen=True)
class Constellation:
    """A finite set of nonnegative L-vectors with cached metrics."""

    dimension: int
    points: tuple[tuple[Fraction, ...], ...]
    min_distance: float
    mean_power: Fraction

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError("a constellation needs at least two points")
        if len(set(self.points)) != len(self.points):
            raise ValueError("constellation points must be distinct")
        if any(c < 0 for p in self.points for c in p):
            raise ValueError("constellation points must be nonnegative")
        if not self.min_distance > 0:
            raise ValueError("minimum distance must be positive")

    def as_array(self) -> np.ndarray:
        return np.array([[float(c) for c in p] for p in self.points])

    @property
    def size(self) -> int:
        return len(self.points)


def _min_distance(points: np.ndarray) -> float:
    best = math.inf
    n = len(points)
    for i in range(n - 1):
        d2 = np.sum((points[i + 1:] - points[i]) ** 2, axis=1)
        best = min(best, float(np.min(d2)))
    return math.sqrt(best)


def _mean_power(points) -> Fraction:
    total = Fraction(0)
    for p in points:
        total += sum(p, Fraction(0))
    return total / len(points)


def _make(points: list[tuple[Fraction, ...]], dimension: int) -> Constellation:
    pts = tuple(points)
    return Constellation(
        dimension=dimension,
        points=pts,
        min_distance=_min_distance(np.array([[float(c) for c in p] for p in pts])),
        mean_power=_mean_power(pts),
    )


def _compositions(total: int, parts: int):
    """Nonnegative integer L-tuples with the given sum, lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _shell(L: int, root: int, n: int, q: int) -> list[tuple[Fraction, ...]]:
    shift = Fraction(n, root)
    return [tuple(shift + x for x in comp) for comp in _compositions(q, L)]


def diophantine_constellation(L: int, K: int) -> Constellation:
    """2^K integer-shell points with minimum distance exactly 1.

    Selection: whole power levels in increasing total power; a partially
    needed boundary level keeps the points with the fewest already-selected
    unit-distance neighbours (corner points first), ties broken
    lexicographically descending.
    """
    if not 1 <= L <= MAX_L:
        raise ValueError(f"L must be in 1..{MAX_L}")
    if not 1 <= K <= MAX_K:
        raise ValueError(f"K must be in 1..{MAX_K}")
    root = math.isqrt(L)
    need = 2**K

    # power of shell (n, q) is q + n*L/root; enumerate levels in power order
    levels: dict[Fraction, list[tuple[Fraction, ...]]] = {}
    q_cap = 1
    while True:
        levels.clear()
        for n in range(root):
            for q in range(q_cap + 1):
                power = Fraction(q) + Fraction(n * L, root)
                if power > q_cap:
                    continue
                levels.setdefault(power, []).extend(_shell(L, root, n, q))
        if sum(len(v) for v in levels.values()) >= need:
            break
        q_cap += 1

    selected: list[tuple[Fraction, ...]] = []
    for power in sorted(levels):
        candidates = sorted(levels[power])
        remaining = need - len(selected)
        if remaining <= 0:
            break
        if len(candidates) <= remaining:
            selected.extend(candidates)
            continue
        # boundary level: rank by unit-distance neighbour count in the
        # already-selected set, then lexicographically descending
        chosen_arr = np.array([[float(c) for c in p] for p in selected])

        def neighbour_count(p):
            arr = np.array([float(c) for c in p])
            d2 = np.sum((chosen_arr - arr) ** 2, axis=1)
            return int(np.sum(np.abs(d2 - 1.0) < 1e-12))

        ranked = sorted(
            candidates,
            key=lambda p: (neighbour_count(p), tuple(-c for c in p)),
        )
        selected.extend(ranked[:remaining])
        break
    return _make(selected, L)


def even_bit_split(L: int, K: int) -> tuple[int, ...]:
    """Split K bits over L slots as evenly as possible, remainder leading.

    Minimizes the total PAM power sum(2^{K_i} - 1)/2 over integer splits.
    """
    if L < 1 or K < 1:
        raise ValueError("L and K must be positive")
    base, rem = divmod(K, L)
    return tuple(base + 1 for _ in range(rem)) + tuple(base for _ in range(L - rem))


def pam_product_constellation(L: int, K: int, split=None) -> Constellation:
    """Cartesian product of per-dimension PAM sets with a power-minimal split."""
    if split is None:
        split = even_bit_split(L, K)
    if len(split) != L or sum(split) != K or any(k < 0 for k in split):
        raise ValueError(f"invalid bit split {split} for L={L}, K={K}")
    axes = [range(2**k) for k in split]
    points = [tuple(Fraction(c) for c in p) for p in itertools.product(*axes)]
    return _make(points, L)


def constellation_csv(c: Constellation) -> str:
    """One row per point: index, label tuple, coordinates."""
    lines = ["index,label," + ",".join(f"s{i}" for i in range(c.dimension))]
    for idx, p in enumerate(c.points):
        label = "(" + " ".join(str(v) for v in p) + ")"
        coords = ",".join(repr(float(v)) for v in p)
        lines.append(f"{idx},{label},{coords}")
    return "\n".join(lines) + "\n"

"""Space-time codebooks for nonnegative (intensity) MIMO channels.

Every constructor normalizes the mean optical power E[1^T X 1] to the number
of time slots L.  Families:

* repetition code: one PAM symbol per slot repeated across apertures;
* optimal linear code: the same with per-aperture weights Omega_i/Omega
  (power loading toward the statistically strong apertures);
* collaborative code (CSTBC): a multidimensional constellation point spread
  over slots, Omega-weighted over apertures;
* Golden code / space-time repetition code: two-slot codes for channels that
  fade independently per slot (fast fading);
* ZCC: the 2x2 counterexample whose difference Grams include a zero-cover
  pair.

Codeword enumeration is lexicographic over symbol tuples, symbol 0 first.
"""
from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constellations import Constellation, even_bit_split

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class LinearProfile:
    """Per-slot PAM structure X[l, i] = scales[l] * weights[i] * p_l.

    Present only for codebooks whose ML detection decouples per slot; the
    fast detector and the semi-analytic error model consume it.
    """

    scales: tuple[float, ...]
    weights: tuple[float, ...]
    levels: tuple[int, ...]


@dataclass(frozen=True)
class Codebook:
    slots: int
    apertures: int
    codewords: np.ndarray  # (C, L, N)
    bits: int
    labels: tuple[tuple, ...]
    power_target: float
    family: str = "custom"
    fast_fading: bool = False
    linear_profile: Optional[LinearProfile] = None

    def __post_init__(self):
        cw = np.asarray(self.codewords, dtype=float)
        object.__setattr__(self, "codewords", cw)
        if cw.ndim != 3 or cw.shape[1:] != (self.slots, self.apertures):
            raise ValueError(
                f"codewords shape {cw.shape} does not match "
                f"(C, {self.slots}, {self.apertures})"
            )
        if len(self.labels) != cw.shape[0]:
            raise ValueError("one label per codeword required")

    @property
    def size(self) -> int:
        return self.codewords.shape[0]

    def mean_power(self) -> float:
        return float(math.fsum(cw.sum() for cw in self.codewords) / self.size)

    def pairwise_grams(self):
        """(i, j, Gram of the codeword difference) over unordered pairs."""
        for i in range(self.size):
            for j in range(i + 1, self.size):
                d = self.codewords[i] - self.codewords[j]
                yield i, j, d.T @ d

    def difference(self, i: int, j: int) -> np.ndarray:
        return self.codewords[i] - self.codewords[j]


def _symbol_grid(levels) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(v) for v in levels)))


def _from_linear(scales, weights, levels, family: str) -> Codebook:
    scales = np.asarray(scales, dtype=float)
    weights = np.asarray(weights, dtype=float)
    L, N = len(scales), len(weights)
    labels = _symbol_grid(levels)
    cw = np.zeros((len(labels), L, N))
    for idx, p in enumerate(labels):
        cw[idx] = scales[:, None] * np.asarray(p, dtype=float)[:, None] * weights[None, :]
    bits = int(sum(round(math.log2(v)) for v in levels))
    return Codebook(
        slots=L,
        apertures=N,
        codewords=cw,
        bits=bits,
        labels=tuple(labels),
        power_target=float(L),
        family=family,
        linear_profile=LinearProfile(
            scales=tuple(float(s) for s in scales),
            weights=tuple(float(w) for w in weights),
            levels=tuple(int(v) for v in levels),
        ),
    )


def _normalize_split(L: int, bit_split) -> tuple[int, ...]:
    if isinstance(bit_split, int):
        if bit_split < L:
            raise ValueError(
                f"total bit count {bit_split} cannot give every one of the "
                f"{L} slots at least one bit"
            )
        return even_bit_split(L, bit_split)
    split = tuple(int(k) for k in bit_split)
    if len(split) != L or any(k < 1 for k in split):
        raise ValueError(f"bit split {split} invalid for L={L} (K_l >= 1)")
    return split


def repetition_code(L: int, bit_split, N: int) -> Codebook:
    """Per-slot PAM repeated over all N apertures; slot scale 2/(N(2^K_l-1))."""
    if L < 1 or N < 1:
        raise ValueError("L and N must be positive")
    split = _normalize_split(L, bit_split)
    scales = [2.0 / (N * (2**k - 1)) for k in split]
    return _from_linear(scales, np.ones(N), [2**k for k in split], "rc")


def optimal_linear_code(L: int, bit_split, omega) -> Codebook:
    """Omega-weighted repetition: X[l, i] = 2/(Omega(2^K_l-1)) Omega_i p_l."""
    w = np.asarray(omega, dtype=float)
    if w.ndim != 1 or np.any(w <= 0):
        raise ValueError("omega must be a vector of positive weights")
    split = _normalize_split(L, bit_split)
    total = float(np.sum(w))
    scales = [2.0 / (total * (2**k - 1)) for k in split]
    return _from_linear(scales, w, [2**k for k in split], "optimal")


def zcc_code() -> Codebook:
    """The 2x2 OOK code with equal rows; one difference Gram has zero cover."""
    labels = _symbol_grid([2, 2])
    cw = np.zeros((4, 2, 2))
    for idx, (x1, x2) in enumerate(labels):
        cw[idx] = [[x1, x2], [x1, x2]]
    return Codebook(
        slots=2, apertures=2, codewords=cw, bits=2, labels=tuple(labels),
        power_target=2.0, family="zcc",
    )


def cstbc_from_constellation(S: Constellation, N: int, omega) -> Codebook:
    """Collaborative code: point s becomes scale * outer(s, Omega).

    scale = L 2^K / (Omega * sum_s 1^T s) makes the mean power exactly L.
    """
    w = np.asarray(omega, dtype=float)
    if w.ndim != 1 or len(w) != N or np.any(w <= 0):
        raise ValueError("omega must hold N positive weights")
    total_power = float(sum(float(sum(p)) for p in S.points))
    if total_power <= 0:
        raise ValueError("constellation has zero total power")
    L = S.dimension
    omega_total = float(np.sum(w))
    scale = L * S.size / (omega_total * total_power)
    pts = S.as_array()
    cw = scale * pts[:, :, None] * w[None, None, :]
    bits = int(round(math.log2(S.size)))
    return Codebook(
        slots=L, apertures=N, codewords=cw, bits=bits,
        labels=tuple(tuple(p) for p in S.points),
        power_target=float(L), family="cstbc",
    )


def golden_design_matrices(N: int, omega) -> tuple[np.ndarray, np.ndarray]:
    """The two N x 2 slot-weight matrices of the golden-ratio code.

    Rows are (Omega_i/Omega)-scaled copies of sqrt(5)/10 * (phi-1, phi) and
    its swap; all entries of F and G sum to 1.
    """
    w = np.asarray(omega, dtype=float)
    V = w / np.sum(w)
    phi = GOLDEN_RATIO
    base_f = math.sqrt(5.0) / 10.0 * np.array([phi - 1.0, phi])
    base_g = base_f[::-1]
    return np.outer(V, base_f), np.outer(V, base_g)


def golden_code(K1: int, K2: int, N: int, omega) -> Codebook:
    """Two-slot golden-ratio code for per-slot independent fading.

    Slot symbols are phi*s1 + (phi-1)*s2 and (phi-1)*s1 + phi*s2 with
    phi = (sqrt(5)+1)/2, columns weighted by Omega_i, scaled by
    4/(Omega(2phi-1)(2^K1 + 2^K2 - 2)); mean power is exactly 2.
    """
    if K1 < 1 or K2 < 1:
        raise ValueError("K1 and K2 must be >= 1")
    w = np.asarray(omega, dtype=float)
    if w.ndim != 1 or len(w) != N or np.any(w <= 0):
        raise ValueError("omega must hold N positive weights")
    phi = GOLDEN_RATIO
    omega_total = float(np.sum(w))
    scale = 4.0 / (omega_total * (2 * phi - 1) * (2**K1 + 2**K2 - 2))
    labels = _symbol_grid([2**K1, 2**K2])
    cw = np.zeros((len(labels), 2, N))
    for idx, (s1, s2) in enumerate(labels):
        x1 = phi * s1 + (phi - 1.0) * s2
        x2 = (phi - 1.0) * s1 + phi * s2
        cw[idx, 0] = scale * x1 * w
        cw[idx, 1] = scale * x2 * w
    return Codebook(
        slots=2, apertures=N, codewords=cw, bits=K1 + K2,
        labels=tuple(labels), power_target=2.0, family="golden",
        fast_fading=True,
    )


def strc_code(K1: int, K2: int, N: int = 2) -> Codebook:
    """Space-time repetition over two slots: all entries equal
    (s1 + 2^K1 s2)/(2^(K1+K2) - 1); mean power is exactly 2."""
    if K1 < 1 or K2 < 1:
        raise ValueError("K1 and K2 must be >= 1")
    denom = 2.0 ** (K1 + K2) - 1.0
    labels = _symbol_grid([2**K1, 2**K2])
    cw = np.zeros((len(labels), 2, N))
    for idx, (s1, s2) in enumerate(labels):
        cw[idx] = 2.0 / N * (s1 + 2**K1 * s2) / denom
    return Codebook(
        slots=2, apertures=N, codewords=cw, bits=K1 + K2,
        labels=tuple(labels), power_target=2.0, family="strc",
        fast_fading=True,
    )


# ---------------------------------------------------------------------------
# validation and CSV round-trip


@dataclass(frozen=True)
class CodebookReport:
    ok: bool
    violations: tuple[str, ...]
    zero_cover_pairs: tuple[tuple[int, int], ...]


def validate_codebook(book: Codebook, check_cover: bool = False) -> CodebookReport:
    """Unipolarity, distinctness and power checks; optionally pairwise cover."""
    violations = []
    if np.any(book.codewords < 0):
        violations.append("negative codeword entries (unipolarity violated)")
    if book.size != 2**book.bits:
        violations.append(
            f"codebook size {book.size} is not 2^bits = {2**book.bits}"
        )
    flat = {tuple(np.round(cw.ravel(), 12)) for cw in book.codewords}
    if len(flat) != book.size:
        violations.append("codewords are not distinct")
    power = book.mean_power()
    if abs(power - book.power_target) > 1e-12 * max(1.0, book.power_target):
        violations.append(
            f"mean power {power!r} misses target {book.power_target!r}"
        )
    zero_pairs = []
    if check_cover:
        from .cover import cover_order

        n = book.apertures * (2 if book.fast_fading else 1)
        for i, j, gram in _cover_grams(book):
            order, _ = cover_order(gram)
            if order < n:
                zero_pairs.append((i, j))
    return CodebookReport(
        ok=not violations, violations=tuple(violations),
        zero_cover_pairs=tuple(zero_pairs),
    )


def _cover_grams(book: Codebook):
    """Difference Grams; two-slot fast-fading codes lift to block diagonals."""
    if not book.fast_fading:
        yield from book.pairwise_grams()
        return
    N = book.apertures
    for i in range(book.size):
        for j in range(i + 1, book.size):
            d = book.codewords[i] - book.codewords[j]
            lifted = np.zeros((2 * N, 2 * N))
            for l in range(2):
                lifted[l * N:(l + 1) * N, l * N:(l + 1) * N] = np.outer(d[l], d[l])
            yield i, j, lifted


def codebook_csv(book: Codebook) -> str:
    """One row per codeword: index, label tuple, row-major entries."""
    buf = io.StringIO()
    header = ["index", "label"]
    header += [f"x{l}{n}" for l in range(book.slots) for n in range(book.apertures)]
    buf.write(",".join(header) + "\n")
    for idx in range(book.size):
        label = "(" + " ".join(str(v) for v in book.labels[idx]) + ")"
        entries = ",".join(repr(float(v)) for v in book.codewords[idx].ravel())
        buf.write(f"{idx},{label},{entries}\n")
    return buf.getvalue()


def load_codebook_csv(text: str, slots: int, apertures: int,
                      power_target: float | None = None) -> Codebook:
    """Inverse of codebook_csv; imported books detect with the brute path."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    rows = []
    labels = []
    for ln in lines[1:]:
        first, rest = ln.split(",", 1)
        label, entries = rest.split(")", 1)
        labels.append(tuple(label.lstrip("(").split()))
        vals = [float(v) for v in entries.lstrip(",").split(",")]
        rows.append(np.array(vals).reshape(slots, apertures))
    cw = np.stack(rows)
    bits = int(round(math.log2(len(rows))))
    book = Codebook(
        slots=slots, apertures=apertures, codewords=cw, bits=bits,
        labels=tuple(labels), family="imported",
        power_target=power_target if power_target is not None else float(slots),
    )
    return book

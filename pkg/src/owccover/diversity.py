"""Error-performance criterion evaluation for nonnegative space-time codes.

Large-scale diversity gain: for a codeword pair with difference Gram G and
cover link {i_k}, the gain is sum_j sum_k sigma_{i_k, j}^-2; the codebook
value is the minimum over distinct pairs.  Small-scale diversity loss is the
worst-case Omega-weighted cover volume prod_i c_i^{Omega_i}; the coding gain
is the worst-case minimum of the Gram quadratic over the nonnegative unit
sphere.  Two-slot codes for per-slot independent fading are lifted to block
diagonal Grams over 2N virtual apertures before analysis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import ChannelStats
from .codes import Codebook
from .constellations import diophantine_constellation, pam_product_constellation
from .cover import cover_lengths, cover_order, min_unit_quadratic
from .qfunc import q_function
from .simulate import ErrorCurve
from . import rng as _rng


# ---------------------------------------------------------------------------
# pairwise bookkeeping


def lifted_stats(stats: ChannelStats, slots: int) -> ChannelStats:
    """Stack per-slot copies of the channel statistics (fast fading)."""
    return ChannelStats(
        mu=np.vstack([stats.mu] * slots),
        sigma=np.vstack([stats.sigma] * slots),
    )


def pair_grams(book: Codebook):
    """(i, j, Gram) over unordered codeword pairs, lifting fast-fading codes
    to block-diagonal Grams over slots * apertures virtual apertures."""
    if not book.fast_fading:
        yield from book.pairwise_grams()
        return
    N = book.apertures
    L = book.slots
    for i in range(book.size):
        for j in range(i + 1, book.size):
            d = book.codewords[i] - book.codewords[j]
            lifted = np.zeros((L * N, L * N))
            for l in range(L):
                lifted[l * N:(l + 1) * N, l * N:(l + 1) * N] = np.outer(d[l], d[l])
            yield i, j, lifted


class _GramCache:
    """Cover results keyed by the rounded difference Gram (differences repeat
    across pairs of linear codes)."""

    def __init__(self):
        self._orders: dict[bytes, tuple[int, tuple[int, ...]]] = {}
        self._lengths: dict[bytes, np.ndarray] = {}

    @staticmethod
    def _key(gram: np.ndarray) -> bytes:
        scale = max(1.0, float(np.max(np.abs(gram))))
        return np.round(gram / scale, 12).tobytes()

    def order(self, gram):
        k = self._key(gram)
        if k not in self._orders:
            self._orders[k] = cover_order(gram)
        return self._orders[k]

    def lengths(self, gram):
        k = self._key(gram)
        if k not in self._lengths:
            self._lengths[k] = cover_lengths(gram)
        return self._lengths[k]


# ---------------------------------------------------------------------------
# report type


@dataclass(frozen=True)
class PairDiagnostics:
    i: int
    j: int
    cover_order: int
    large_scale: float
    loss: float  # inf when the pair lacks full cover


@dataclass(frozen=True)
class DiversityReport:
    large_scale: float
    worst_pair: tuple[int, int]
    small_scale_loss: Optional[float]
    loss_pair: Optional[tuple[int, int]]
    coding_gain: Optional[float]
    pairs: tuple[PairDiagnostics, ...]

    def as_text(self) -> str:
        lines = [
            f"large_scale_diversity = {self.large_scale:.12g}",
            f"worst_pair = {self.worst_pair[0]},{self.worst_pair[1]}",
        ]
        if self.small_scale_loss is not None:
            lines.append(f"small_scale_loss = {self.small_scale_loss:.12g}")
            lines.append(f"loss_pair = {self.loss_pair[0]},{self.loss_pair[1]}")
        if self.coding_gain is not None:
            lines.append(f"coding_gain = {self.coding_gain:.12g}")
        return "\n".join(lines) + "\n"

    def pairs_csv(self) -> str:
        lines = ["i,j,cover_order,large_scale,loss"]
        for p in self.pairs:
            loss = "inf" if math.isinf(p.loss) else f"{p.loss!r}"
            lines.append(f"{p.i},{p.j},{p.cover_order},{p.large_scale!r},{loss}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# criterion pieces


def large_scale_diversity(book: Codebook, stats: ChannelStats,
                          include_loss: bool = False,
                          include_coding_gain: bool = False) -> DiversityReport:
    """Worst-pair large-scale diversity gain (optionally loss/coding gain)."""
    eff_stats = lifted_stats(stats, book.slots) if book.fast_fading else stats
    if eff_stats.n != book.apertures * (book.slots if book.fast_fading else 1):
        raise ValueError("channel statistics do not match the codebook")
    inv_var = eff_stats.sigma**-2.0  # (N', M)
    omega = eff_stats.omega()
    cache = _GramCache()
    diags = []
    worst = None
    worst_pair = None
    worst_loss = None
    loss_pair = None
    for i, j, gram in pair_grams(book):
        order, link = cache.order(gram)
        gain = float(np.sum(inv_var[list(link), :])) if link else 0.0
        loss = math.inf
        if include_loss and order == gram.shape[0]:
            c = cache.lengths(gram)
            loss = float(np.prod(c**omega))
        diags.append(PairDiagnostics(i, j, order, gain, loss))
        if worst is None or gain < worst:
            worst, worst_pair = gain, (i, j)
        if include_loss and (worst_loss is None or loss > worst_loss):
            worst_loss, loss_pair = loss, (i, j)
    return DiversityReport(
        large_scale=worst,
        worst_pair=worst_pair,
        small_scale_loss=worst_loss,
        loss_pair=loss_pair,
        coding_gain=coding_gain(book) if include_coding_gain else None,
        pairs=tuple(diags),
    )


def small_scale_loss(book: Codebook, omega) -> tuple[float, tuple[int, int]]:
    """Worst-case Omega-weighted cover volume over codeword pairs.

    Raises when a pair lacks full cover (the loss is defined only for
    full-cover differences).
    """
    w = np.asarray(omega, dtype=float)
    cache = _GramCache()
    worst = None
    worst_pair = None
    for i, j, gram in pair_grams(book):
        order, _ = cache.order(gram)
        if order < gram.shape[0]:
            raise ValueError(
                f"pair ({i}, {j}) lacks full cover; small-scale loss undefined"
            )
        c = cache.lengths(gram)
        loss = float(np.prod(c**w))
        if worst is None or loss > worst:
            worst, worst_pair = loss, (i, j)
    return worst, worst_pair


def coding_gain(book: Codebook) -> float:
    """min over pairs of the Gram quadratic minimum on the nonneg unit sphere
    (zero as soon as one pair lacks full cover)."""
    cache = _GramCache()
    best = math.inf
    for _, _, gram in pair_grams(book):
        order, _ = cache.order(gram)
        if order < gram.shape[0]:
            return 0.0
        best = min(best, min_unit_quadratic(gram))
    return best


def linear_loss_lower_bound(K: int, omega) -> float:
    """((2^K - 1)/2)^Omega * prod_i (Omega/Omega_i)^{Omega_i}."""
    if K < 1:
        raise ValueError("K must be >= 1")
    w = np.asarray(omega, dtype=float)
    total = float(np.sum(w))
    return float(
        ((2.0**K - 1.0) / 2.0) ** total * np.prod((total / w) ** w)
    )


# ---------------------------------------------------------------------------
# asymptotic PEP bounds (full-cover pairs)


def jacobi_max_eigenvalue(G: np.ndarray, tol: float = 1e-12,
                          max_sweeps: int = 100) -> float:
    """Largest eigenvalue by cyclic Jacobi rotations (symmetric, n <= 12)."""
    A = np.array(G, dtype=float)
    n = A.shape[0]
    if n == 1:
        return float(A[0, 0])
    limit = tol * max(1.0, float(np.max(np.abs(A))))
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(A[p, q]))
                if abs(A[p, q]) <= limit:
                    continue
                theta = 0.5 * math.atan2(2.0 * A[p, q], A[q, q] - A[p, p])
                c, s = math.cos(theta), math.sin(theta)
                rot = np.eye(n)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                A = rot.T @ A @ rot
        if off <= limit:
            break
    return float(np.max(np.diag(A)))


def pep_bounds(gram, stats: ChannelStats, snr: float) -> tuple[float, float]:
    """Asymptotic lower/upper PEP bounds for a full-cover difference Gram.

    Evaluated exactly as displayed (the vanishing remainder of the upper
    bound is dropped; the result is labeled asymptotic).  Requires
    snr > e^2 so every logarithm is in range.
    """
    G = np.asarray(gram, dtype=float)
    N, M = stats.n, stats.m
    if G.shape != (N, N):
        raise ValueError("Gram dimension does not match channel statistics")
    if snr <= math.e**2:
        raise ValueError("bounds need snr > e^2")
    order, _ = cover_order(G)
    if order < N:
        raise ValueError("PEP bounds require a full-cover pair")
    lam = jacobi_max_eigenvalue(G)
    c = cover_lengths(G)
    cmin = min_unit_quadratic(G)
    omega_i = stats.omega()
    omega = float(np.sum(omega_i))
    omt_i = stats.omega_tilde()
    omt = float(np.sum(omt_i))
    sigma = stats.sigma
    mu = stats.mu
    lnr = math.log(snr)

    # lower bound
    a = (lnr + 2.0 * math.log(lam) + 2.0 * mu) / (2.0 * sigma)  # (N, M)
    c_l = (
        math.sqrt(float(np.prod(sigma**2)))
        * float(q_function(math.sqrt(M / (4.0 * N))))
        / (math.sqrt(2.0 * math.pi) * lam**omt)
    )
    lower = c_l * float(np.prod((1.0 - a**-2.0) / a)) * math.exp(
        -float(np.sum(a**2)) / 2.0
    )
    lower = max(lower, 0.0)

    # upper bound
    ln_cover = float(np.sum(omega_i * np.log(c)))
    exponent = 0.5 * ln_cover - 0.5 * omega * math.log(N * omega) - 0.25 * omt
    c_u = (
        (omega * cmin / N**2) ** (-M * N / 2.0)
        / (2.0 * math.sqrt(float(np.prod(sigma**2))))
        * float(np.prod(c ** (omt_i - omega_i * math.log(N * omega))))
    )
    reduced = snr / lnr**2
    upper = (
        c_u
        * reduced**exponent
        * lnr ** (-M * N)
        * math.exp(-omega * math.log(reduced) ** 2 / 8.0)
    )
    return lower, upper


def pep_estimate(gram, stats: ChannelStats, snr: float, draws: int = 200_000,
                 seed: int = 0, shift: float | None = None):
    """Monte Carlo estimate of the average PEP E_H[Q(d/2)] with
    d^2 = (rho/N) sum_j h_j^T G h_j.

    At high SNR the integrand lives where every channel coefficient is
    ~1/sqrt(rho), far in the log-normal tail, so the log-channel means are
    shifted there (importance sampling with exact reweighting).  shift=0
    recovers plain Monte Carlo.  Returns (estimate, ci_half)."""
    G = np.asarray(gram, dtype=float)
    N, M = stats.n, stats.m
    if shift is None:
        shift = -0.5 * math.log(snr) + 0.5 * math.log(
            N / max(float(jacobi_max_eigenvalue(G)), 1e-300))
    gen = _rng.stream(seed, _rng.PURPOSE_GENERIC, 0, 0)
    z = _rng.normals(gen, (draws, N, M))
    logh = stats.mu + shift + stats.sigma * z
    H = np.exp(logh)
    # importance weight of the mean shift, per draw
    dev = logh - stats.mu
    logw = np.sum(
        (-(dev**2) + (dev - shift) ** 2) / (2.0 * stats.sigma**2), axis=(1, 2)
    )
    w = np.exp(logw)
    quad = np.einsum("tnj,nk,tkj->t", H, G, H)
    vals = w * q_function(np.sqrt(snr * quad / (4.0 * N)))
    est = float(np.mean(vals))
    ci = float(1.96 * np.std(vals) / math.sqrt(draws))
    return est, ci


# ---------------------------------------------------------------------------
# curve fitting and design metrics


def fit_diversity_from_curve(curve: ErrorCurve, min_errors: int = 50,
                             window_db: float = 10.0) -> float:
    """Slope of ln P against -ln^2(rho)/8 over the top qualifying decade.

    Monte-Carlo points qualify with >= min_errors observed errors; the
    window is the topmost window_db of qualifying points, extended downward
    to at least 3 points.
    """
    pts = []
    for s, r, t in zip(curve.snr_db, curve.rate, curve.trials):
        if r <= 0.0:
            continue
        if curve.method == "monte-carlo" and r * t < min_errors:
            continue
        pts.append((float(s), float(r)))
    if len(pts) < 3:
        raise ValueError("need at least 3 qualifying positive-rate points")
    pts.sort()
    top = pts[-1][0]
    window = [p for p in pts if p[0] >= top - window_db]
    k = len(pts) - len(window)
    while len(window) < 3 and k > 0:
        k -= 1
        window = pts[k:]
    rho = np.array([10.0 ** (s / 10.0) for s, _ in window])
    y = np.log(np.array([r for _, r in window]))
    x = -np.log(rho) ** 2 / 8.0
    xc = x - x.mean()
    return float(np.sum(xc * (y - y.mean())) / np.sum(xc**2))


def energy_report(L: int, K: int) -> tuple[float, float, float]:
    """Mean optical powers of the integer-shell and PAM-product
    constellations and their ratio."""
    ps = float(diophantine_constellation(L, K).mean_power)
    pp = float(pam_product_constellation(L, K).mean_power)
    return ps, pp, ps / pp


def golden_min_metric(K1: int, K2: int) -> int:
    """min over nonzero error pairs of (3 e1 e2 + e1^2 + e2^2)^2, exactly."""
    if K1 < 1 or K2 < 1:
        raise ValueError("K1 and K2 must be >= 1")
    best = None
    for e1 in range(-(2**K1 - 1), 2**K1):
        for e2 in range(-(2**K2 - 1), 2**K2):
            if e1 == 0 and e2 == 0:
                continue
            v = (3 * e1 * e2 + e1 * e1 + e2 * e2) ** 2
            if best is None or v < best:
                best = v
    return best


def golden_grid_search(step: float = 0.005) -> float:
    """Max-min objective over the OOK design simplex, grid-searched.

    Objective: min(f1^2 g1^2, f2^2 g2^2, (f1-f2)^2 (g1-g2)^2) over positive
    weights summing to 1.  The closed-form optimum is 1/400 at the
    golden-ratio split; the grid maximum must not exceed it (+ tolerance).
    """
    n = int(round(1.0 / step))
    vals = np.arange(1, n) * step
    best = 0.0
    for f1 in vals:
        f2 = vals[vals < 1.0 - f1 - step + 1e-12]
        if len(f2) == 0:
            continue
        f2v, g1v = np.meshgrid(f2, vals, indexing="ij")
        g2v = 1.0 - f1 - f2v - g1v
        ok = g2v > 1e-12
        if not np.any(ok):
            continue
        f2v, g1v, g2v = f2v[ok], g1v[ok], g2v[ok]
        obj = np.minimum(
            (f1 * g1v) ** 2,
            np.minimum((f2v * g2v) ** 2, ((f1 - f2v) * (g1v - g2v)) ** 2),
        )
        m = float(np.max(obj))
        if m > best:
            best = m
    return best

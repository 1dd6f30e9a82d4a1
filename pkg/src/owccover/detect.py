"""Maximum-likelihood detection: brute-force and fast projection paths."""
from __future__ import annotations

import math

import numpy as np

from .codes import Codebook, LinearProfile
from .kernels import brute_ml_decide


def ml_detect(Y: np.ndarray, H: np.ndarray, book: Codebook) -> int:
    """Codeword index minimizing the Frobenius distance ||Y - X_k H||.

    Ties break to the lowest index.  H is (N, M) for block fading or
    (L, N, M) when each slot saw its own channel.
    """
    if book.size == 0:
        raise ValueError("empty codebook")
    Y = np.asarray(Y, dtype=float)
    H = np.asarray(H, dtype=float)
    if Y.shape != (book.slots, np.shape(H)[-1]):
        raise ValueError(f"received shape {Y.shape} inconsistent with codebook")
    dec = brute_ml_decide(Y[None], H[None], book.codewords)
    return int(dec[0])


def fast_ml_detect(y: np.ndarray, H: np.ndarray, v: np.ndarray, K: int) -> int:
    """PAM level for one slot: project on the weighted channel, clamp, round.

    y is the received row (M,), H the channel (N, M), v the aperture weight
    vector; the projection y H^T v / ||H^T v||^2 is rounded half-up and
    clamped to {0, ..., 2^K - 1}.
    """
    y = np.asarray(y, dtype=float)
    H = np.asarray(H, dtype=float)
    v = np.asarray(v, dtype=float)
    g = H.T @ v
    denom = float(g @ g)
    if denom == 0.0:
        raise ValueError("degenerate channel: H v is zero")
    proj = float(y @ g) / denom
    return int(min(max(math.floor(proj + 0.5), 0), 2**K - 1))


def fast_ml_decide_batch(Y: np.ndarray, H: np.ndarray,
                         profile: LinearProfile) -> np.ndarray:
    """Vectorized per-slot fast detection returning codeword indices.

    Exact ML for per-slot PAM codebooks: the metric separates across slots,
    so per-slot projections reproduce the brute-force argmin.
    """
    scales = np.asarray(profile.scales)
    weights = np.asarray(profile.weights)
    levels = np.asarray(profile.levels)
    B, L, M = Y.shape
    g0 = np.einsum("n,tnm->tm", weights, H)  # (B, M): shared across slots
    denom0 = np.einsum("tm,tm->t", g0, g0)
    if np.any(denom0 == 0.0):
        raise ValueError("degenerate channel: H v is zero")
    symbols = np.empty((B, L), dtype=np.int64)
    for l in range(L):
        g = scales[l] * g0
        denom = scales[l] ** 2 * denom0
        proj = np.einsum("tm,tm->t", Y[:, l, :], g) / denom
        k = np.floor(proj + 0.5).astype(np.int64)
        symbols[:, l] = np.clip(k, 0, levels[l] - 1)
    # lexicographic label order: the last slot's symbol varies fastest
    strides = np.ones(L, dtype=np.int64)
    for l in range(L - 2, -1, -1):
        strides[l] = strides[l + 1] * levels[l + 1]
    return symbols @ strides

"""Detection-kernel backend selection.

The compiled Cython extension is preferred when it imported cleanly; the
NumPy einsum path is the fallback and the reference for equivalence tests.
Set OWCCOVER_BACKEND=python to force the fallback (used by the benchmark).
"""
from __future__ import annotations

import os

import numpy as np

try:
    from . import _mlkernel as _ext
except ImportError:  # pragma: no cover - depends on build environment
    _ext = None

_FORCED = os.environ.get("OWCCOVER_BACKEND", "").lower()
HAVE_EXTENSION = _ext is not None
ACTIVE_BACKEND = "cython" if (HAVE_EXTENSION and _FORCED != "python") else "python"


def _decide_block_numpy(Y, H, X):
    # signal[t, k, l, m] = sum_n X[k, l, n] H[t, n, m]
    sig = np.einsum("kln,tnm->tklm", X, H)
    d = ((Y[:, None, :, :] - sig) ** 2).sum(axis=(2, 3))
    return np.argmin(d, axis=1).astype(np.int64)


def _decide_fast_numpy(Y, H, X):
    sig = np.einsum("kln,tlnm->tklm", X, H)
    d = ((Y[:, None, :, :] - sig) ** 2).sum(axis=(2, 3))
    return np.argmin(d, axis=1).astype(np.int64)


def brute_ml_decide(Y: np.ndarray, H: np.ndarray, X: np.ndarray, *,
                    backend: str | None = None) -> np.ndarray:
    """Vector of argmin-distance codeword indices for a batch of trials.

    Y: (B, L, M); X: (C, L, N); H: (B, N, M) for block fading or
    (B, L, N, M) for per-slot (fast) fading.
    """
    which = backend or ACTIVE_BACKEND
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    X = np.ascontiguousarray(X, dtype=np.float64)
    H = np.ascontiguousarray(H, dtype=np.float64)
    if H.ndim == 3:
        if which == "cython" and _ext is not None:
            return _ext.brute_ml_decide_block(Y, H, X)
        return _decide_block_numpy(Y, H, X)
    if H.ndim == 4:
        if which == "cython" and _ext is not None:
            return _ext.brute_ml_decide_fast(Y, H, X)
        return _decide_fast_numpy(Y, H, X)
    raise ValueError(f"channel array must be 3-D or 4-D, got shape {H.shape}")

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled brute-force ML detection kernels.

Distance loops only; all randomness is generated outside so the compiled and
NumPy backends consume identical streams.  Ties break to the lowest codeword
index (strict improvement required to switch).
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def brute_ml_decide_block(double[:, :, ::1] Y, double[:, :, ::1] H,
                          double[:, :, ::1] X):
    """argmin_k ||Y[t] - X[k] @ H[t]||_F^2 for block-fading trials.

    Y: (B, L, M) received, H: (B, N, M) channels, X: (C, L, N) codewords.
    """
    cdef Py_ssize_t B = Y.shape[0], L = Y.shape[1], M = Y.shape[2]
    cdef Py_ssize_t N = H.shape[1], C = X.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(B, dtype=np.int64)
    cdef cnp.int64_t[:] dec = out
    cdef Py_ssize_t t, k, l, m, n
    cdef double d, best, s, diff
    cdef Py_ssize_t arg
    for t in range(B):
        best = -1.0
        arg = 0
        for k in range(C):
            d = 0.0
            for l in range(L):
                for m in range(M):
                    s = 0.0
                    for n in range(N):
                        s += X[k, l, n] * H[t, n, m]
                    diff = Y[t, l, m] - s
                    d += diff * diff
            if best < 0.0 or d < best:
                best = d
                arg = k
        dec[t] = arg
    return out


def brute_ml_decide_fast(double[:, :, ::1] Y, double[:, :, :, ::1] H,
                         double[:, :, ::1] X):
    """Same as brute_ml_decide_block with a per-slot channel H: (B, L, N, M)."""
    cdef Py_ssize_t B = Y.shape[0], L = Y.shape[1], M = Y.shape[2]
    cdef Py_ssize_t N = H.shape[2], C = X.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(B, dtype=np.int64)
    cdef cnp.int64_t[:] dec = out
    cdef Py_ssize_t t, k, l, m, n
    cdef double d, best, s, diff
    cdef Py_ssize_t arg
    for t in range(B):
        best = -1.0
        arg = 0
        for k in range(C):
            d = 0.0
            for l in range(L):
                for m in range(M):
                    s = 0.0
                    for n in range(N):
                        s += X[k, l, n] * H[t, l, n, m]
                    diff = Y[t, l, m] - s
                    d += diff * diff
            if best < 0.0 or d < best:
                best = d
                arg = k
        dec[t] = arg
    return out

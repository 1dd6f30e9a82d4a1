"""Reproducible counter-based randomness for the simulators.

Streams are Philox(4x64) keyed by the 64-bit run seed with the counter words
carrying (purpose, point index, block index).  Trials are grouped in fixed
blocks of TRIAL_BLOCK, so the randomness consumed by trial t of SNR point p
is a pure function of (seed, p, t) no matter how blocks are scheduled across
threads.  Gaussians come from the inverse normal CDF applied to open-interval
uniforms; consumption per draw is fixed (no rejection), which keeps the
counter layout intact.
"""
from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox
from scipy.special import ndtri

TRIAL_BLOCK = 8192

PURPOSE_MONTE_CARLO = 0
PURPOSE_SEMI_ANALYTIC = 1
PURPOSE_GENERIC = 2


def stream(seed: int, purpose: int, point: int, block: int) -> Generator:
    """Independent generator for one (purpose, point, block) cell."""
    if not 0 <= int(seed) < 2**64:
        raise ValueError("seed must fit in 64 bits")
    bg = Philox(key=int(seed), counter=[0, int(purpose), int(point), int(block)])
    return Generator(bg)


def uniforms(gen: Generator, shape) -> np.ndarray:
    """Uniforms on the open interval (0, 1) with fixed consumption."""
    bits = gen.integers(0, 1 << 53, size=shape, dtype=np.uint64)
    return (bits.astype(np.float64) + 0.5) / float(1 << 53)


def normals(gen: Generator, shape) -> np.ndarray:
    """Standard normals via the inverse-CDF map (scipy.special.ndtri)."""
    return ndtri(uniforms(gen, shape))

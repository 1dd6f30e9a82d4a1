"""Log-normal MIMO channel statistics and reproducible channel sampling.

Each of the N*M links fades independently: h_ij = exp(z_ij) with
z_ij ~ Normal(mu_ij, sigma_ij^2).  The per-aperture inverse-variance sums
Omega_i = sum_j sigma_ij^-2 are what the code constructors consume.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng


@dataclass(frozen=True)
class ChannelStats:
    """Per-link log-normal parameters for an N x M aperture array."""

    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        mu = np.atleast_2d(np.asarray(self.mu, dtype=float))
        sigma = np.atleast_2d(np.asarray(self.sigma, dtype=float))
        if mu.shape != sigma.shape:
            raise ValueError(
                f"mu shape {mu.shape} does not match sigma shape {sigma.shape}"
            )
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(sigma))):
            raise ValueError("channel parameters must be finite")
        if np.any(sigma <= 0):
            raise ValueError("all sigma_ij must be positive")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def uniform(cls, n: int, m: int, sigma: float, mu: float = 0.0) -> "ChannelStats":
        return cls(mu=np.full((n, m), mu), sigma=np.full((n, m), sigma))

    @classmethod
    def per_aperture(cls, sigmas, m: int, mus=None) -> "ChannelStats":
        """Same parameters for every receive branch of each transmit aperture."""
        s = np.asarray(sigmas, dtype=float)
        mu = np.zeros_like(s) if mus is None else np.asarray(mus, dtype=float)
        return cls(mu=np.repeat(mu[:, None], m, axis=1),
                   sigma=np.repeat(s[:, None], m, axis=1))

    @property
    def n(self) -> int:
        return self.mu.shape[0]

    @property
    def m(self) -> int:
        return self.mu.shape[1]

    def omega(self) -> np.ndarray:
        """Omega_i = sum_j sigma_ij^-2 (one entry per transmit aperture)."""
        return np.sum(self.sigma**-2.0, axis=1)

    def omega_total(self) -> float:
        return float(np.sum(self.omega()))

    def omega_tilde(self) -> np.ndarray:
        """Omega~_i = sum_j mu_ij sigma_ij^-2."""
        return np.sum(self.mu * self.sigma**-2.0, axis=1)

    def omega_tilde_total(self) -> float:
        return float(np.sum(self.omega_tilde()))


@dataclass(frozen=True)
class NoiseModel:
    """Total noise variance sigma_N^2; per receive entry it is sigma_N^2 / M."""

    sigma_n_sq: float

    def __post_init__(self):
        if not self.sigma_n_sq > 0:
            raise ValueError("noise variance must be positive")

    @classmethod
    def from_snr_db(cls, snr_db: float) -> "NoiseModel":
        return cls(sigma_n_sq=10.0 ** (-snr_db / 10.0))

    @property
    def snr(self) -> float:
        return 1.0 / self.sigma_n_sq

    def entry_std(self, m: int) -> float:
        return float(np.sqrt(self.sigma_n_sq / m))


def sample_channel_block(
    stats: ChannelStats,
    seed: int,
    point: int,
    block: int,
    size: int,
    slots: int | None = None,
    purpose: int = rng.PURPOSE_MONTE_CARLO,
) -> np.ndarray:
    """Block of channel draws: (size, N, M), or (size, L, N, M) for per-slot
    (fast) fading when `slots` is given.  Deterministic in all arguments."""
    gen = rng.stream(seed, purpose, point, block)
    shape = (size, stats.n, stats.m) if slots is None else (
        size, slots, stats.n, stats.m)
    z = rng.normals(gen, shape)
    return np.exp(stats.mu + stats.sigma * z)


def sample_channel(stats: ChannelStats, seed: int, trial_index: int) -> np.ndarray:
    """Channel matrix of trial `trial_index` (bit-identical on every call).

    Trials live in fixed blocks of rng.TRIAL_BLOCK draws; the block is
    regenerated and sliced so batch and single-trial paths agree exactly.
    """
    block, offset = divmod(int(trial_index), rng.TRIAL_BLOCK)
    H = sample_channel_block(stats, seed, point=0, block=block,
                             size=rng.TRIAL_BLOCK)
    return H[offset]

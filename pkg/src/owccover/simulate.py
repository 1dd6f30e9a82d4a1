"""Codeword error-rate estimation over log-normal fading.

Monte Carlo: per SNR point, i.i.d. trials draw a channel, a uniform
codeword and Gaussian noise of per-entry variance sigma_N^2 / M with
sigma_N^2 = 1/rho, detect, and count codeword errors.  Trials live in fixed
blocks (rng.TRIAL_BLOCK) so results are bit-identical under any thread
count; early stopping is evaluated at block granularity and is therefore
deterministic too.

Semi-analytic: for per-slot PAM codebooks the conditional codeword error
given the channel is 1 - prod_l (1 - SEP_l) with
SEP_l = 2(2^K_l - 1)/2^K_l * Q(sqrt(d_eff^2 / (2 sigma_N^2))) and
d_eff^2 = M ||g_l||^2 / 2, where g_l = scale_l * (w^T H) is the scalar
equivalent channel of slot l.  Averaging over channel draws (shared across
the SNR grid) gives the curve; the Monte Carlo path is the oracle of record
for this model.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng
from .channel import ChannelStats, NoiseModel
from .codes import Codebook
from .detect import fast_ml_decide_batch
from .kernels import brute_ml_decide
from .qfunc import q_function

Z95 = 1.959963984540054  # two-sided 95% normal quantile


@dataclass(frozen=True)
class ErrorCurve:
    """Error-rate estimates over an SNR grid (dB)."""

    snr_db: tuple[float, ...]
    rate: tuple[float, ...]
    trials: tuple[int, ...]
    ci_half: tuple[float, ...]
    method: str

    def __post_init__(self):
        k = len(self.snr_db)
        if not (len(self.rate) == len(self.trials) == len(self.ci_half) == k):
            raise ValueError("curve columns must have equal length")
        if any(not 0.0 <= r <= 1.0 for r in self.rate):
            raise ValueError("rates must lie in [0, 1]")
        if any(c < 0 for c in self.ci_half):
            raise ValueError("confidence half-widths must be nonnegative")

    def csv(self) -> str:
        lines = ["snr_db,rate,trials,ci_half,method"]
        for s, r, t, c in zip(self.snr_db, self.rate, self.trials, self.ci_half):
            lines.append(f"{s!r},{r!r},{t},{c!r},{self.method}")
        return "\n".join(lines) + "\n"


def load_curve_csv(text: str) -> ErrorCurve:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    snr, rate, trials, ci = [], [], [], []
    method = "unknown"
    for ln in lines[1:]:
        s, r, t, c, m = ln.split(",")
        snr.append(float(s))
        rate.append(float(r))
        trials.append(int(t))
        ci.append(float(c))
        method = m
    return ErrorCurve(tuple(snr), tuple(rate), tuple(trials), tuple(ci), method)


def _binomial_ci(errors: int, done: int) -> float:
    if done == 0:
        return 0.0
    p = errors / done
    return Z95 * math.sqrt(max(p * (1.0 - p), 0.0) / done)


def _draw_block(book: Codebook, stats: ChannelStats, seed: int, point: int,
                block: int):
    """One deterministic block of (channel, noise, codeword-index) draws."""
    gen = rng.stream(seed, rng.PURPOSE_MONTE_CARLO, point, block)
    B = rng.TRIAL_BLOCK
    if book.fast_fading:
        shape = (B, book.slots, stats.n, stats.m)
    else:
        shape = (B, stats.n, stats.m)
    H = np.exp(stats.mu + stats.sigma * rng.normals(gen, shape))
    noise = rng.normals(gen, (B, book.slots, stats.m))
    tx = gen.integers(0, book.size, size=B, dtype=np.int64)
    return H, noise, tx


def _detect_block(book: Codebook, Y, H, detector: str) -> np.ndarray:
    if detector == "brute":
        return brute_ml_decide(Y, H, book.codewords)
    if detector == "fast":
        if book.linear_profile is None or book.fast_fading:
            raise ValueError(
                "fast detector requires a per-slot PAM (linear) block-fading "
                f"codebook; family {book.family!r} is incompatible"
            )
        return fast_ml_decide_batch(Y, H, book.linear_profile)
    raise ValueError(f"unknown detector {detector!r}")


def _run_point(book: Codebook, stats: ChannelStats, noise: NoiseModel,
               seed: int, point: int, trials: int, detector: str,
               early_stop_errors: int | None, threads: int,
               collect: bool = False):
    entry_std = noise.entry_std(stats.m)
    n_blocks = (trials + rng.TRIAL_BLOCK - 1) // rng.TRIAL_BLOCK

    def run_block(b: int):
        take = min(rng.TRIAL_BLOCK, trials - b * rng.TRIAL_BLOCK)
        H, z, tx = _draw_block(book, stats, seed, point, b)
        if book.fast_fading:
            S = np.einsum("tln,tlnm->tlm", book.codewords[tx], H)
        else:
            S = np.einsum("tln,tnm->tlm", book.codewords[tx], H)
        Y = S + entry_std * z
        dec = _detect_block(book, Y, H, detector)
        wrong = dec[:take] != tx[:take]
        if collect:
            return int(np.sum(wrong)), take, tx[:take], dec[:take]
        return int(np.sum(wrong)), take, None, None

    # Accumulation walks blocks in order and stops at the first block where
    # the error budget is met; blocks a wave computed beyond that point are
    # discarded, so the result is independent of the thread count.
    errors = 0
    done = 0
    txs, decs = [], []
    stopped = False
    wave = max(1, threads)
    with ThreadPoolExecutor(max_workers=wave) as pool:
        for start in range(0, n_blocks, wave):
            chunk = range(start, min(start + wave, n_blocks))
            for e, t, a, d in pool.map(run_block, chunk):
                errors += e
                done += t
                if collect:
                    txs.append(a)
                    decs.append(d)
                if early_stop_errors is not None and errors >= early_stop_errors:
                    stopped = True
                    break
            if stopped:
                break
    if collect:
        return errors, done, np.concatenate(txs), np.concatenate(decs)
    return errors, done, None, None


def simulate_error_rate(
    book: Codebook,
    stats: ChannelStats,
    snr_db_grid,
    trials: int = 100_000,
    seed: int = 0,
    detector: str = "brute",
    early_stop_errors: int | None = 200,
    threads: int = 1,
) -> ErrorCurve:
    """Monte Carlo codeword error curve over an SNR grid (dB)."""
    if stats.n != book.apertures:
        raise ValueError(
            f"channel has {stats.n} transmit apertures, codebook {book.apertures}"
        )
    rates, counts, cis = [], [], []
    for point, _snr in enumerate(snr_db_grid):
        noise = NoiseModel.from_snr_db(float(_snr))
        errors, done, _, _ = _run_point(
            book, stats, noise, seed, point, trials, detector,
            early_stop_errors, threads,
        )
        rates.append(errors / done)
        counts.append(done)
        cis.append(_binomial_ci(errors, done))
    return ErrorCurve(
        snr_db=tuple(float(s) for s in snr_db_grid),
        rate=tuple(rates), trials=tuple(counts), ci_half=tuple(cis),
        method="monte-carlo",
    )


def simulate_decisions(book: Codebook, stats: ChannelStats, snr_db: float,
                       trials: int, seed: int, detector: str,
                       point: int = 0):
    """(transmitted, decided) index arrays for one SNR point (test hook)."""
    noise = NoiseModel.from_snr_db(snr_db)
    _, _, tx, dec = _run_point(
        book, stats, noise, seed, point, trials, detector,
        early_stop_errors=None, threads=1, collect=True,
    )
    return tx, dec


def noise_free_error_count(book: Codebook, stats: ChannelStats, trials: int,
                           seed: int) -> int:
    """Errors over noise-free trials (zero for identifiable codebooks)."""
    errors = 0
    n_blocks = (trials + rng.TRIAL_BLOCK - 1) // rng.TRIAL_BLOCK
    for b in range(n_blocks):
        take = min(rng.TRIAL_BLOCK, trials - b * rng.TRIAL_BLOCK)
        H, _, tx = _draw_block(book, stats, seed, 0, b)
        if book.fast_fading:
            S = np.einsum("tln,tlnm->tlm", book.codewords[tx], H)
        else:
            S = np.einsum("tln,tnm->tlm", book.codewords[tx], H)
        dec = _detect_block(book, S, H, "brute")
        errors += int(np.sum(dec[:take] != tx[:take]))
    return errors


def slot_equivalent_gains(book: Codebook, H: np.ndarray) -> np.ndarray:
    """g[d, l, m] = scale_l * sum_i w_i H[d, i, m] for a batch of channels."""
    prof = book.linear_profile
    if prof is None:
        raise ValueError(
            f"codebook family {book.family!r} has no per-slot PAM structure"
        )
    g0 = np.einsum("n,dnm->dm", np.asarray(prof.weights), H)
    scales = np.asarray(prof.scales)
    return scales[None, :, None] * g0[:, None, :]


def semianalytic_error_rate(
    book: Codebook,
    stats: ChannelStats,
    snr_db_grid,
    channel_draws: int = 100_000,
    seed: int = 0,
) -> ErrorCurve:
    """Average codeword error from the exact conditional per-slot SEP.

    Only valid for per-slot PAM (RC / optimal linear) codebooks.  Channel
    draws are shared across the SNR grid; the reported half-width is the 95%
    normal CI of the conditional-probability average.
    """
    prof = book.linear_profile
    if prof is None or book.fast_fading:
        raise ValueError(
            f"semi-analytic model requires a per-slot PAM block-fading "
            f"codebook; family {book.family!r} is incompatible"
        )
    if stats.n != book.apertures:
        raise ValueError("channel/codebook aperture mismatch")
    M = stats.m
    levels = np.asarray(prof.levels, dtype=float)
    prefactor = 2.0 * (levels - 1.0) / levels  # (L,)

    blocks = []
    n_blocks = (channel_draws + rng.TRIAL_BLOCK - 1) // rng.TRIAL_BLOCK
    for b in range(n_blocks):
        take = min(rng.TRIAL_BLOCK, channel_draws - b * rng.TRIAL_BLOCK)
        H = np.exp(stats.mu + stats.sigma * rng.normals(
            rng.stream(seed, rng.PURPOSE_SEMI_ANALYTIC, 0, b),
            (rng.TRIAL_BLOCK, stats.n, stats.m)))
        blocks.append(H[:take])
    H = np.concatenate(blocks)
    g = slot_equivalent_gains(book, H)          # (D, L, M)
    gain2 = np.sum(g * g, axis=2)               # (D, L): ||g_l||^2
    d_eff_sq = M * gain2 / 2.0

    rates, cis = [], []
    for snr_db in snr_db_grid:
        noise = NoiseModel.from_snr_db(float(snr_db))
        arg = np.sqrt(d_eff_sq / (2.0 * noise.sigma_n_sq))
        sep = prefactor[None, :] * q_function(arg)
        p_cw = 1.0 - np.prod(1.0 - sep, axis=1)
        rates.append(float(np.mean(p_cw)))
        cis.append(float(Z95 * np.std(p_cw) / math.sqrt(len(p_cw))))
    return ErrorCurve(
        snr_db=tuple(float(s) for s in snr_db_grid),
        rate=tuple(min(max(r, 0.0), 1.0) for r in rates),
        trials=tuple(len(H) for _ in snr_db_grid),
        ci_half=tuple(cis),
        method="semi-analytic",
    )

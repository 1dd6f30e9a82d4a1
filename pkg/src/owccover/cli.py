"""Command-line front end.

    owccover --config run.toml --out results/ [--seed N] [--trials N]
             [--threads N]

Each run writes one directory: config.echo (verbatim input), the command's
artifacts (curve.csv / report.txt / *.csv) and meta (seed, version, wall
time).  Artifacts other than meta are byte-identical for identical
(config, seed).  Exit codes: 0 ok, 2 config error, 3 runtime error.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .channel import ChannelStats
from .codes import (
    Codebook,
    codebook_csv,
    cstbc_from_constellation,
    golden_code,
    optimal_linear_code,
    repetition_code,
    strc_code,
    validate_codebook,
    zcc_code,
)
from .config import ConfigError, RunConfig, parse_config, snr_grid
from .constellations import (
    constellation_csv,
    diophantine_constellation,
    pam_product_constellation,
)
from .cover import cover_report
from .diversity import large_scale_diversity, pep_bounds
from .simulate import semianalytic_error_rate, simulate_error_rate


def _build_constellation(tab: dict):
    family = tab.get("family", "diophantine")
    slots = int(tab.get("slots", 1))
    k = int(tab.get("k", 1))
    if family == "diophantine":
        return diophantine_constellation(slots, k)
    if family == "pam":
        return pam_product_constellation(slots, k)
    raise ConfigError(f"unknown constellation family {family!r}")


def _build_codebook(cfg: RunConfig) -> Codebook:
    tab = cfg.table("codebook")
    family = tab.get("family")
    omega = tab.get("omega")
    if omega is None and cfg.channel is not None:
        omega = cfg.channel.omega()
    try:
        if family == "rc":
            return repetition_code(int(tab.get("slots", 1)), tab.get("bits", 1),
                                   int(tab.get("apertures", 2)))
        if family == "optimal":
            if omega is None:
                raise ConfigError("optimal code needs omega or a [channel]")
            return optimal_linear_code(int(tab.get("slots", 1)),
                                       tab.get("bits", 1), omega)
        if family == "zcc":
            return zcc_code()
        if family == "cstbc":
            if omega is None:
                raise ConfigError("cstbc needs omega or a [channel]")
            const = _build_constellation({
                "family": tab.get("constellation", "diophantine"),
                "slots": tab.get("slots", 1),
                "k": tab.get("k", 1),
            })
            return cstbc_from_constellation(const, int(tab.get("apertures", 1)),
                                            omega)
        if family == "golden":
            if omega is None:
                raise ConfigError("golden code needs omega or a [channel]")
            return golden_code(int(tab.get("k1", 1)), int(tab.get("k2", 1)),
                               int(tab.get("apertures", len(np.atleast_1d(omega)))),
                               omega)
        if family == "strc":
            return strc_code(int(tab.get("k1", 1)), int(tab.get("k2", 1)),
                             int(tab.get("apertures", 2)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError(f"unknown codebook family {family!r}")


def _cmd_cover(cfg: RunConfig, out: Path) -> None:
    tab = cfg.table("cover")
    if "gram" in tab:
        rep = cover_report(np.asarray(tab["gram"], dtype=float))
    elif "factor" in tab:
        from .cover import GramMatrix

        rep = cover_report(GramMatrix.from_factor(np.asarray(tab["factor"],
                                                             dtype=float)))
    else:
        raise ConfigError("[cover] needs a gram or factor matrix")
    (out / "report.txt").write_text(rep.as_text())


def _cmd_codebook(cfg: RunConfig, out: Path) -> None:
    book = _build_codebook(cfg)
    (out / "codebook.csv").write_text(codebook_csv(book))
    rep = validate_codebook(book, check_cover=bool(
        cfg.tables.get("codebook", {}).get("check_cover", False)))
    lines = [
        f"family = {book.family}",
        f"slots = {book.slots}",
        f"apertures = {book.apertures}",
        f"codewords = {book.size}",
        f"bits = {book.bits}",
        f"mean_power = {book.mean_power()!r}",
        f"valid = {str(rep.ok).lower()}",
    ]
    for v in rep.violations:
        lines.append(f"violation = {v}")
    for i, j in rep.zero_cover_pairs:
        lines.append(f"zero_cover_pair = {i},{j}")
    (out / "report.txt").write_text("\n".join(lines) + "\n")


def _cmd_constellation(cfg: RunConfig, out: Path) -> None:
    tab = cfg.table("constellation")
    const = _build_constellation(tab)
    (out / "constellation.csv").write_text(constellation_csv(const))
    lines = [
        f"points = {const.size}",
        f"mean_power = {float(const.mean_power)!r}",
        f"min_distance = {const.min_distance!r}",
    ]
    (out / "report.txt").write_text("\n".join(lines) + "\n")


def _cmd_simulate(cfg: RunConfig, out: Path) -> None:
    if cfg.channel is None:
        raise ConfigError("simulate needs a [channel] table")
    tab = cfg.table("simulate")
    grid = snr_grid(tab.get("snr_db", {"start": 0, "stop": 40, "step": 5}))
    book = _build_codebook(cfg)
    method = tab.get("method", "monte-carlo")
    trials = cfg.trials or int(tab.get("trials", 100_000))
    if method == "monte-carlo":
        early = int(tab.get("early_stop_errors", 200))
        curve = simulate_error_rate(
            book, cfg.channel, grid, trials=trials, seed=cfg.seed,
            detector=tab.get("detector", "brute"),
            early_stop_errors=early if early > 0 else None,
            threads=cfg.threads,
        )
    elif method == "semi-analytic":
        curve = semianalytic_error_rate(
            book, cfg.channel, grid,
            channel_draws=int(tab.get("channel_draws", trials)),
            seed=cfg.seed,
        )
    else:
        raise ConfigError(f"unknown simulate method {method!r}")
    (out / "curve.csv").write_text(curve.csv())


def _cmd_bounds(cfg: RunConfig, out: Path) -> None:
    if cfg.channel is None:
        raise ConfigError("bounds needs a [channel] table")
    tab = cfg.table("bounds")
    if "gram" in tab:
        gram = np.asarray(tab["gram"], dtype=float)
    elif "pair" in tab:
        book = _build_codebook(cfg)
        i, j = (int(v) for v in tab["pair"])
        d = book.difference(i, j)
        gram = d.T @ d
    else:
        raise ConfigError("[bounds] needs a gram matrix or a codebook pair")
    grid = snr_grid(tab.get("snr_db", {"start": 40, "stop": 70, "step": 10}))
    lines = ["snr_db,lower,upper"]
    for s in grid:
        lo, hi = pep_bounds(gram, cfg.channel, 10.0 ** (s / 10.0))
        lines.append(f"{s!r},{lo!r},{hi!r}")
    (out / "bounds.csv").write_text("\n".join(lines) + "\n")


def _cmd_report(cfg: RunConfig, out: Path) -> None:
    if cfg.channel is None:
        raise ConfigError("report needs a [channel] table")
    book = _build_codebook(cfg)
    include_loss = bool(cfg.tables.get("report", {}).get("include_loss", True))
    rep = large_scale_diversity(book, cfg.channel, include_loss=include_loss,
                                include_coding_gain=include_loss)
    (out / "report.txt").write_text(rep.as_text())
    (out / "pairs.csv").write_text(rep.pairs_csv())


_DISPATCH = {
    "cover": _cmd_cover,
    "codebook": _cmd_codebook,
    "constellation": _cmd_constellation,
    "simulate": _cmd_simulate,
    "bounds": _cmd_bounds,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="owccover",
        description="Cover analysis, code construction and fading simulation "
                    "for nonnegative MIMO channels.",
    )
    parser.add_argument("--config", required=True, help="TOML run config")
    parser.add_argument("--out", default="runs/latest", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="seed override")
    parser.add_argument("--trials", type=int, default=None,
                        help="trials-per-point override")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for the Monte Carlo loop")
    args = parser.parse_args(argv)

    started = time.time()
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"config error: cannot read {args.config}: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.trials is not None:
            cfg.trials = args.trials
        if args.threads is not None:
            cfg.threads = args.threads
        if cfg.command in ("simulate",) and cfg.seed is None:
            raise ConfigError("simulate is stochastic: seed is required")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.echo").write_text(text)
        _DISPATCH[cfg.command](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # precondition violations raised by the library are config-induced
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - boundary of the CLI
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    meta = [
        f"command = {cfg.command}",
        f"seed = {cfg.seed}",
        f"version = {__version__}",
        f"wall_time_s = {time.time() - started:.3f}",
    ]
    (out / "meta").write_text("\n".join(meta) + "\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

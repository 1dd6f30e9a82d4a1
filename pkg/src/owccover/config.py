"""Run configuration: strict TOML with unknown-key rejection.

A config is one TOML document with a top-level `command` plus the tables the
command needs.  Every key is checked against the schema below; typos fail the
parse (silent typos invalidate scientific runs).  SNR grids are given in dB
and converted as rho = 10^(dB/10).

Schema (keys per table):

  command                 cover | codebook | constellation | simulate |
                          bounds | report
  seed, trials, threads   integers (seed required for stochastic commands)
  [channel]               n, m, sigma, mu   (sigma/mu: scalar, per-aperture
                          list, or full n x m matrix)
  [cover]                 gram | factor     (row-major numeric matrix)
  [codebook]              family (rc | optimal | cstbc | golden | strc |
                          zcc), slots, apertures, bits (int or per-slot
                          list), omega (list; default from channel), k1, k2,
                          constellation (diophantine | pam), k, check_cover
  [constellation]         family (diophantine | pam), slots, k
  [simulate]              snr_db (list or start/stop/step table), detector
                          (brute | fast), method (monte-carlo |
                          semi-analytic), trials, early_stop_errors (0 = off),
                          channel_draws
  [bounds]                gram, snr_db, pair (with [codebook])
  [report]                include_loss
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .channel import ChannelStats

COMMANDS = ("cover", "codebook", "constellation", "simulate", "bounds", "report")
STOCHASTIC = ("simulate", "bounds", "report")

_TOP_KEYS = {"command", "seed", "trials", "threads", "channel", "cover",
             "codebook", "constellation", "simulate", "bounds", "report"}
_TABLE_KEYS = {
    "channel": {"n", "m", "sigma", "mu"},
    "cover": {"gram", "factor"},
    "codebook": {"family", "slots", "apertures", "bits", "omega", "k1", "k2",
                 "constellation", "k", "check_cover"},
    "constellation": {"family", "slots", "k"},
    "simulate": {"snr_db", "detector", "method", "trials",
                 "early_stop_errors", "channel_draws"},
    "bounds": {"gram", "snr_db", "pair"},
    "report": {"include_loss"},
}


class ConfigError(ValueError):
    """Invalid run configuration; maps to exit code 2."""


@dataclass
class RunConfig:
    command: str
    seed: Optional[int] = None
    trials: Optional[int] = None
    threads: int = 1
    channel: Optional[ChannelStats] = None
    tables: dict[str, dict[str, Any]] = field(default_factory=dict)

    def table(self, name: str) -> dict[str, Any]:
        if name not in self.tables:
            raise ConfigError(f"command {self.command!r} needs a [{name}] table")
        return self.tables[name]


def _reject_unknown(name: str, table: dict, allowed: set[str]) -> None:
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) in [{name}]: {', '.join(sorted(unknown))}"
        )


def _as_matrix(value, name: str) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} is not a numeric matrix: {exc}") from None
    if arr.ndim != 2:
        raise ConfigError(f"{name} must be a 2-D row-major matrix")
    return arr


def _channel_from_table(tab: dict) -> ChannelStats:
    _reject_unknown("channel", tab, _TABLE_KEYS["channel"])
    try:
        n = int(tab["n"])
        m = int(tab["m"])
    except KeyError as exc:
        raise ConfigError(f"[channel] is missing key {exc}") from None

    def grid(value, label, default=None):
        if value is None:
            if default is None:
                raise ConfigError(f"[channel] is missing {label}")
            return np.full((n, m), default)
        if isinstance(value, (int, float)):
            return np.full((n, m), float(value))
        arr = np.asarray(value, dtype=float)
        if arr.shape == (n,):
            return np.repeat(arr[:, None], m, axis=1)
        if arr.shape == (n, m):
            return arr
        raise ConfigError(
            f"[channel] {label} must be a scalar, a length-{n} list or an "
            f"{n}x{m} matrix; got shape {arr.shape}"
        )

    sigma = grid(tab.get("sigma"), "sigma")
    mu = grid(tab.get("mu"), "mu", default=0.0)
    try:
        return ChannelStats(mu=mu, sigma=sigma)
    except ValueError as exc:
        raise ConfigError(f"invalid [channel]: {exc}") from None


def parse_config(text: str) -> RunConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config is not valid TOML: {exc}") from None
    _reject_unknown("top level", raw, _TOP_KEYS)
    command = raw.get("command")
    if command not in COMMANDS:
        raise ConfigError(
            f"command must be one of {', '.join(COMMANDS)}; got {command!r}"
        )
    cfg = RunConfig(command=command)
    if "seed" in raw:
        cfg.seed = int(raw["seed"])
    if "trials" in raw:
        cfg.trials = int(raw["trials"])
        if cfg.trials < 1:
            raise ConfigError("trials must be positive")
    if "threads" in raw:
        cfg.threads = int(raw["threads"])
        if cfg.threads < 1:
            raise ConfigError("threads must be positive")
    if "channel" in raw:
        cfg.channel = _channel_from_table(raw["channel"])
    for name in ("cover", "codebook", "constellation", "simulate", "bounds",
                 "report"):
        if name in raw:
            tab = raw[name]
            if not isinstance(tab, dict):
                raise ConfigError(f"[{name}] must be a table")
            _reject_unknown(name, tab, _TABLE_KEYS[name])
            cfg.tables[name] = tab
    if command == "simulate" and cfg.seed is None:
        raise ConfigError("simulate is stochastic: seed is required")
    if command in ("bounds", "report") and cfg.seed is None:
        cfg.seed = 0
    return cfg


def snr_grid(value) -> list[float]:
    """List of dB points from a literal list or a start/stop/step table."""
    if isinstance(value, dict):
        unknown = set(value) - {"start", "stop", "step"}
        if unknown:
            raise ConfigError(
                f"unknown key(s) in snr_db table: {', '.join(sorted(unknown))}"
            )
        try:
            start = float(value["start"])
            stop = float(value["stop"])
            step = float(value.get("step", 5.0))
        except KeyError as exc:
            raise ConfigError(f"snr_db table is missing {exc}") from None
        if step <= 0 or stop < start:
            raise ConfigError("snr_db table needs step > 0 and stop >= start")
        return [float(v) for v in np.arange(start, stop + step / 2, step)]
    grid = [float(v) for v in value]
    if not grid:
        raise ConfigError("snr_db grid is empty")
    return grid

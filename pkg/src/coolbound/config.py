"""Flat ``key = value`` run configuration.

Example::

    # qubit target, two-level machine
    target_spectrum = 0, 1
    machine_spectrum = 0, 2
    beta_R = 1.0
    beta_H = inf-temp      # hot bath at infinite temperature
    protocol = max-swap

Keys are case-insensitive; ``#`` starts a comment. Every error names the
offending line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .errors import ConfigError
from .protocols import DEFAULT_MAX_CYCLES, DEFAULT_TOLERANCE, Protocol

INF_TEMP = "inf-temp"
INITIAL_KEYWORDS = ("thermal", "rho_star", "uniform")


def _floats(text):
    parts = [t for t in text.replace(",", " ").split() if t]
    if not parts:
        raise ValueError("expected a list of numbers")
    vals = tuple(float(t) for t in parts)
    if not all(math.isfinite(v) for v in vals):
        raise ValueError("numbers must be finite")
    return vals


def _beta(text):
    v = float(text)
    if not math.isfinite(v) or v < 0:
        raise ValueError("inverse temperature must be finite and >= 0")
    return v


def _beta_h(text):
    return 0.0 if text.strip().lower() == INF_TEMP else _beta(text)


def _positive(text):
    v = float(text)
    if not v > 0 or not math.isfinite(v):
        raise ValueError("must be a positive number")
    return v


def _count(minimum):
    def parse(text):
        v = int(text)
        if v < minimum:
            raise ValueError(f"must be an integer >= {minimum}")
        return v
    return parse


def _initial(text):
    t = text.strip().lower()
    return t if t in INITIAL_KEYWORDS else _floats(text)


def _nonneg(text):
    v = float(text)
    if not v >= 0 or not math.isfinite(v):
        raise ValueError("must be a finite number >= 0")
    return v


_PARSERS = {
    "target_spectrum": _floats,
    "machine_spectrum": _floats,
    "beta_r": _beta,
    "beta_h": _beta_h,
    "protocol": lambda t: Protocol(t.strip().lower()),
    "tolerance": _positive,
    "max_cycles": _count(0),
    "seed": _count(0),
    "initial": _initial,
    "trials": _count(1),
    "max_target_dim": _count(2),
    "max_machine_dim": _count(2),
    "n_max": _count(1),
    "e_max": _nonneg,
    "sweep_key": lambda t: t.strip().lower(),
    "sweep_values": lambda t: tuple(t.replace(",", " ").split()),
    "workers": _count(1),
}


@dataclass
class RunConfig:
    target_spectrum: tuple | None = None
    machine_spectrum: tuple | None = None
    beta_r: float | None = None
    beta_h: float | None = None
    protocol: Protocol = Protocol.MAX_SWAP
    tolerance: float = DEFAULT_TOLERANCE
    max_cycles: int = DEFAULT_MAX_CYCLES
    seed: int = 0
    initial: object = "thermal"
    trials: int = 1000
    max_target_dim: int = 4
    max_machine_dim: int = 6
    n_max: int | None = None
    e_max: float | None = None
    sweep_key: str | None = None
    sweep_values: tuple = ()
    workers: int = 1
    lines: dict = field(default_factory=dict, repr=False)

    def line_of(self, key):
        return self.lines.get(key)

    def require(self, *keys):
        for key in keys:
            if getattr(self, key) is None:
                raise ConfigError(f"missing required key '{key}'")

    def with_value(self, key, raw):
        """Copy with one key re-parsed from text (used by sweeps)."""
        if key not in _PARSERS:
            raise ConfigError(f"unknown sweep key '{key}'", self.line_of("sweep_key"))
        try:
            value = _PARSERS[key](raw)
        except ValueError as exc:
            raise ConfigError(f"bad sweep value {raw!r} for '{key}': {exc}",
                              self.line_of("sweep_values")) from None
        kwargs = {f.name: getattr(self, f.name) for f in fields(self)}
        kwargs[key] = value
        return RunConfig(**kwargs)


def parse_config(text: str) -> RunConfig:
    cfg = RunConfig()
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key not in _PARSERS:
            raise ConfigError(f"unknown key '{key}'", lineno)
        if key in seen:
            raise ConfigError(f"duplicate key '{key}' (first set on line {seen[key]})", lineno)
        if not value:
            raise ConfigError(f"empty value for '{key}'", lineno)
        try:
            setattr(cfg, key, _PARSERS[key](value))
        except ValueError as exc:
            raise ConfigError(f"invalid value for '{key}': {exc}", lineno) from None
        seen[key] = lineno
    cfg.lines = seen
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)

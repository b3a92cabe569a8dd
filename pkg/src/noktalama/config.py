"""Flat key=value configuration shared by the CLI and the service."""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

ENV_CONFIG = "NOKTALAMA_CONFIG"

_KNOWN_KEYS = {
    "vocab_path", "max_len", "reserved_specials", "train_frac", "test_frac",
    "valid_frac", "seed", "backend", "model_path", "endpoint", "format",
    "column", "join_after_apostrophe",
}


class ConfigError(ValueError):
    """Invalid configuration; message names the offending field."""

    def __init__(self, fieldname: str, reason: str):
        super().__init__(f"config field '{fieldname}': {reason}")
        self.fieldname = fieldname


@dataclass
class Config:
    vocab_path: str | None = None
    max_len: int = 512
    reserved_specials: int = 2
    train_frac: Fraction = Fraction(7, 10)
    test_frac: Fraction = Fraction(1, 5)
    valid_frac: Fraction = Fraction(1, 10)
    seed: int = 0
    backend: str = "baseline"
    model_path: str | None = None
    endpoint: str | None = None
    format: str = "jsonl"
    column: str = "content"
    join_after_apostrophe: bool = True

    @property
    def content_budget(self) -> int:
        """Token budget per segment once special slots are reserved."""
        return self.max_len - self.reserved_specials

    def validate(self) -> None:
        if self.max_len < 2:
            raise ConfigError("max_len", "must be >= 2")
        if self.reserved_specials < 0 or self.reserved_specials >= self.max_len:
            raise ConfigError("reserved_specials", "must be in [0, max_len)")
        for name in ("train_frac", "test_frac", "valid_frac"):
            frac = getattr(self, name)
            if frac < 0 or frac > 1:
                raise ConfigError(name, "must lie in [0, 1]")
        if self.train_frac + self.test_frac + self.valid_frac != 1:
            raise ConfigError("train_frac", "split fractions must sum to 1")
        if self.backend not in ("baseline", "external"):
            raise ConfigError("backend", f"unknown backend {self.backend!r}")
        if self.format not in ("csv", "jsonl"):
            raise ConfigError("format", f"unknown format {self.format!r}")
        if self.endpoint is not None:
            host, _, port = self.endpoint.rpartition(":")
            if not host or not port.isdigit():
                raise ConfigError("endpoint", "expected host:port")


def _parse_value(config: Config, key: str, value: str) -> None:
    try:
        if key in ("max_len", "reserved_specials", "seed"):
            setattr(config, key, int(value))
        elif key in ("train_frac", "test_frac", "valid_frac"):
            setattr(config, key, Fraction(value))
        elif key == "join_after_apostrophe":
            setattr(config, key, value.lower() in ("1", "true", "yes"))
        else:
            setattr(config, key, value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(key, f"bad value {value!r}: {exc}") from None


def load_config(path: str | Path | None = None) -> Config:
    """Load config from a file, the NOKTALAMA_CONFIG env var, or defaults."""
    config = Config()
    if path is None:
        path = os.environ.get(ENV_CONFIG)
    if path is None:
        return config
    path = Path(path)
    if not path.exists():
        raise ConfigError("config", f"file not found: {path}")
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError("config", f"line {line_no}: expected key=value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(key, "unknown config key")
        _parse_value(config, key, value)
    return config

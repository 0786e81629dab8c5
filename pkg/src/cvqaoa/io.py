"""Run configuration and CSV result tables.

A result table is CSV preceded by ``#``-prefixed metadata. With the ``# ``
prefix stripped the metadata is a TOML document with ``[meta]``, ``[config]``
and optional ``[summary]`` tables, so a result file doubles as the config
that regenerates it.
"""

from __future__ import annotations

import dataclasses
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from . import __version__

SEED_ENV_VAR = "CVQAOA_SEED"

BACKENDS = ("optical", "ideal")

# Config keys that are accepted under another name and folded into one field.
ALIASES = {"samples_per_step": "samples", "samples_per_point": "samples", "root_seed": "seed"}


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class RunConfig:
    """Flat parameter set shared by all subcommands; each uses the keys it needs.

    ``None`` means "use the subcommand's default".
    """

    seed: int = 0
    backend: str = "optical"
    squeeze_db: float = 5.3
    antisqueeze_db: float = 9.0
    a: float | None = None
    eta: float = 0.5
    gamma: float = 1.0
    samples: int | None = None
    grid: int = 21
    grid_lo: float = 0.1
    grid_hi: float = 10.0
    steps: int = 100
    repeats: int = 11
    n_a: int = 30
    threshold: float = 1e-9
    n_initial: int = 5
    kappa0: float = 2.576
    kappa_decay: float = 0.97
    bin_width: float = 0.1
    margin: float = 10.0
    dt: float = 1e-9
    gamma_rate: float = 3e7
    t1: float = 50e-9
    windows: int = 10000
    input: str | None = None
    n_jobs: int = 1

    def __post_init__(self):
        for f in dataclasses.fields(self):
            _check_type(f.name, getattr(self, f.name), f.type)
        positive = ("squeeze_db", "antisqueeze_db", "eta", "gamma", "grid_lo", "grid_hi", "threshold",
                    "kappa0", "bin_width", "dt", "gamma_rate", "t1")
        for key in positive:
            if not getattr(self, key) > 0:
                raise ConfigError(key, f"must be positive, got {getattr(self, key)!r}")
        for key in ("grid", "steps", "repeats", "n_a", "windows"):
            if getattr(self, key) < 1:
                raise ConfigError(key, "must be at least 1")
        if self.samples is not None and self.samples < 1:
            raise ConfigError("samples", "must be at least 1")
        if self.n_initial < 0:
            raise ConfigError("n_initial", "must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed", "must be a 64-bit unsigned integer")
        if self.backend not in BACKENDS:
            raise ConfigError("backend", f"must be one of {BACKENDS}")
        if not 0 < self.kappa_decay < 1:
            raise ConfigError("kappa_decay", "must lie in (0, 1)")
        if not self.margin > 1:
            raise ConfigError("margin", "must exceed 1")
        if not self.grid_lo < self.grid_hi:
            raise ConfigError("grid_hi", "must exceed grid_lo")
        if self.a is not None and not math.isfinite(self.a):
            raise ConfigError("a", "must be finite")
        if self.dt >= self.t1:
            raise ConfigError("dt", "must be smaller than t1")

    @classmethod
    def from_mapping(cls, values: dict[str, Any]) -> RunConfig:
        return cls(**normalize_keys(values))

    def updated(self, values: dict[str, Any]) -> RunConfig:
        return dataclasses.replace(self, **normalize_keys(values))

    def to_dict(self) -> dict[str, Any]:
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}


_FIELD_NAMES = {f.name for f in dataclasses.fields(RunConfig)}


def normalize_keys(values: dict[str, Any]) -> dict[str, Any]:
    out = {}
    for key, value in values.items():
        name = ALIASES.get(key, key)
        if name not in _FIELD_NAMES:
            raise ConfigError(key, "unknown key")
        out[name] = value
    return out


def _check_type(key: str, value: Any, annotation: str) -> None:
    if value is None:
        if "None" not in annotation:
            raise ConfigError(key, "may not be empty")
        return
    if annotation.startswith("int"):
        ok = isinstance(value, (int, np.integer)) and not isinstance(value, bool)
    elif annotation.startswith("float"):
        ok = isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool)
    else:
        ok = isinstance(value, str)
    if not ok:
        raise ConfigError(key, f"expected {annotation.split(' ')[0]}, got {type(value).__name__} {value!r}")


def _read_metadata(text: str) -> dict[str, Any] | None:
    lines = [ln[2:] if ln.startswith("# ") else ln[1:] for ln in text.splitlines() if ln.startswith("#")]
    if not lines:
        return None
    return tomllib.loads("\n".join(lines))


def load_config(path) -> RunConfig:
    """Read a flat TOML config file, or the ``[config]`` block of a result table."""
    _, values = read_config_values(path)
    return RunConfig.from_mapping(values)


def read_config_values(path) -> tuple[str | None, dict[str, Any]]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        meta = _read_metadata(text)
        if meta is not None and "config" in meta:
            return meta.get("meta", {}).get("command"), meta["config"]
        return None, tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(path), f"not a valid config file ({exc})") from exc


@dataclass
class ResultTable:
    columns: list[str]
    rows: np.ndarray | list
    command: str = ""
    config: dict[str, Any] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        rows = [list(r) for r in self.rows]
        if any(len(r) != len(self.columns) for r in rows):
            raise ValueError("every row needs one value per column")
        self.rows = rows


def format_number(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _toml_value(value) -> str:
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def render_table(table: ResultTable) -> str:
    out = ["## cvqaoa result table", "# [meta]", f"# command = {_toml_value(table.command)}",
           f"# version = {_toml_value(__version__)}", "# [config]"]
    out += [f"# {k} = {_toml_value(v)}" for k, v in sorted(table.config.items())]
    if table.summary:
        out.append("# [summary]")
        out += [f"# {k} = {_toml_value(v)}" for k, v in table.summary.items()]
    out.append(",".join(table.columns))
    out += [",".join(format_number(v) for v in row) for row in table.rows]
    return "\n".join(out) + "\n"


def write_table(table: ResultTable, path) -> None:
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render_table(table))
    except OSError as exc:
        raise RuntimeError(f"cannot write result table to {path}: {exc}") from exc


def read_table(path) -> ResultTable:
    text = Path(path).read_text(encoding="utf-8")
    meta = _read_metadata(text) or {}
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    columns = body[0].split(",") if body else []
    rows = [[_parse_number(v) for v in ln.split(",")] for ln in body[1:] if ln]
    return ResultTable(columns, rows, meta.get("meta", {}).get("command", ""),
                       meta.get("config", {}), meta.get("summary", {}))


def _parse_number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def load_time_series(path) -> np.ndarray:
    """Detector samples from a text file: one value per line (last column if several)."""
    data = np.loadtxt(path, comments="#", delimiter=None, ndmin=2)
    return data[:, -1]

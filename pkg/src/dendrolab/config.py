"""Run configuration: a JSON object whose keys mirror the CLI flags.

Flags given on the command line override file values.  Unknown keys are an
error, so a config file fully determines a run.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

from .exactnat import DEFAULT_DIGIT_CAP
from .scales import ScaleTable

_U64 = (1 << 64) - 1


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    beta: int = 4
    kmax: int = 3
    digit_cap: int = DEFAULT_DIGIT_CAP
    seed: int = 0
    out: str = "."
    horizon: Optional[str] = None
    checkpoints: Optional[List[str]] = None
    start: Optional[List[str]] = None
    starts: Optional[int] = None
    region: str = "U0"
    max_rank: int = 24
    x: Optional[str] = None
    y: Optional[str] = None
    eps: str = "1/32"
    delta: str = "1/16"
    observable: str = "distance_to_o"
    j: Optional[int] = None
    precision: int = 64
    J: int = 3
    n: Optional[List[int]] = None
    oracle: bool = False
    U: str = "C:0"
    V: str = "C:0"
    depth: int = 3
    branches: int = 6
    scale: int = 1
    pairs: int = 10_000
    steps: int = 20
    overlay_orbit: Optional[str] = None
    output: Optional[str] = None

    def validate(self) -> "Config":
        if self.beta < 2:
            raise ConfigError("beta must be >= 2, got %d" % self.beta)
        if self.kmax < 0:
            raise ConfigError("kmax must be >= 0")
        if self.digit_cap < 1:
            raise ConfigError("digit_cap must be >= 1")
        if not 0 <= self.seed <= _U64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.J < 1:
            raise ConfigError("J must be >= 1")
        if self.depth < 0 or self.branches < 1:
            raise ConfigError("depth must be >= 0 and branches >= 1")
        if self.precision < 1 or self.steps < 0 or self.max_rank < 0 or self.pairs < 0:
            raise ConfigError("precision, steps, max_rank and pairs must be natural numbers")
        if self.starts is not None and self.starts < 1:
            raise ConfigError("starts must be >= 1")
        if self.region not in ("U0", "E0"):
            raise ConfigError("region must be U0 or E0")
        if self.scale < 1:
            raise ConfigError("scale must be >= 1")
        for name in ("eps", "delta"):
            if parse_rational(getattr(self, name)) <= 0:
                raise ConfigError("%s must be positive" % name)
        return self


_INT_FIELDS = {"beta", "kmax", "digit_cap", "seed", "starts", "max_rank", "j", "precision", "J",
               "depth", "branches", "scale", "pairs", "steps"}
_LIST_FIELDS = {"checkpoints", "start", "n"}


def _as_int(key: str, v: Any) -> int:
    if isinstance(v, bool):
        raise ConfigError("%s must be an integer" % key)
    if isinstance(v, int):
        return v
    if isinstance(v, str) and re.fullmatch(r"-?[0-9]+", v.strip()):
        return int(v)
    raise ConfigError("%s must be an integer, got %r" % (key, v))


def _coerce(key: str, v: Any) -> Any:
    if v is None:
        return None
    if key in _LIST_FIELDS:
        items = v.split(",") if isinstance(v, str) and key != "start" else v
        if isinstance(items, str):
            items = [items]
        if not isinstance(items, list):
            raise ConfigError("%s must be a list" % key)
        if key == "n":
            return [_as_int(key, x) for x in items]
        return [str(x).strip() for x in items]
    if key in _INT_FIELDS:
        return _as_int(key, v)
    if key == "oracle":
        if not isinstance(v, bool):
            raise ConfigError("oracle must be true or false")
        return v
    if not isinstance(v, (str, int)) or isinstance(v, bool):
        raise ConfigError("%s must be a string" % key)
    return str(v)


def load_file(path: str) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc)) from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a single JSON object")
    return data


def build_config(file_values: Dict[str, Any], overrides: Dict[str, Any]) -> Config:
    known = {f.name for f in fields(Config)}
    unknown = sorted(set(file_values) - known)
    if unknown:
        raise ConfigError("unknown config keys: %s" % ", ".join(unknown))
    merged = dict(file_values)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return Config(**{k: _coerce(k, v) for k, v in merged.items()}).validate()


# value syntax ---------------------------------------------------------------------

def parse_rational(text: Union[str, int]) -> Fraction:
    """'1/32', '2^-5', '0.03125' or '3'."""
    s = str(text).strip()
    m = re.fullmatch(r"2\^(-?[0-9]+)", s)
    try:
        if m:
            return Fraction(2) ** int(m.group(1))
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ConfigError("not a rational number: %r" % s) from None


def parse_natural(text: Union[str, int], table: Optional[ScaleTable] = None) -> int:
    """A decimal, an integral literal like '1.1e6', or a table name such as N2, M1, c3, D1."""
    s = str(text).strip()
    m = re.fullmatch(r"([NMcD])([0-9]+)", s)
    if m:
        if table is None:
            raise ConfigError("%s needs a scale table" % s)
        row = table.row(int(m.group(2)))
        v = {"N": row.N, "M": row.M, "c": row.c, "D": row.D}[m.group(1)]
        if v is None or not v.is_literal:
            raise ConfigError("%s is not materialized" % s)
        return v.value
    try:
        q = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ConfigError("not a natural number: %r" % s) from None
    if q.denominator != 1 or q < 0:
        raise ConfigError("not a natural number: %r" % s)
    return int(q)

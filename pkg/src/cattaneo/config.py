"""Range/mode specs, ``key = value`` config files and output formatting."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .catalog import SpectralSequence, mu_sequence


class UsageError(ValueError):
    """Invalid command-line or config-file input (exit code 2)."""


def parse_range(spec: str, key: str = "range") -> np.ndarray:
    """``lo:hi:log|lin:count`` -> ascending array of ``count`` values."""
    parts = spec.split(":")
    if len(parts) != 4:
        raise UsageError(f"{key}: expected lo:hi:log|lin:count, got {spec!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[3])
    except ValueError:
        raise UsageError(f"{key}: cannot parse {spec!r}") from None
    scale = parts[2]
    if count < 1:
        raise UsageError(f"{key}: count must be >= 1")
    if not (hi >= lo) or not np.isfinite(lo) or not np.isfinite(hi):
        raise UsageError(f"{key}: need finite lo <= hi, got {spec!r}")
    if count > 1 and hi == lo:
        raise UsageError(f"{key}: lo == hi with count > 1 gives a non-ascending range")
    if scale == "log":
        if lo <= 0:
            raise UsageError(f"{key}: log range needs lo > 0")
        return np.geomspace(lo, hi, count)
    if scale == "lin":
        return np.linspace(lo, hi, count)
    raise UsageError(f"{key}: scale must be 'log' or 'lin', got {scale!r}")


def parse_modes(spec: str, key: str = "modes") -> SpectralSequence:
    """``n4:400`` | ``c*n^p:count`` | ``list:v1,v2,...``."""
    try:
        if spec.startswith("list:"):
            vals = [float(v) for v in spec[5:].split(",") if v.strip()]
            return mu_sequence("list", values=vals)
        law, count = spec.rsplit(":", 1)
        count = int(count)
        if law.startswith("n") and "^" not in law:
            return mu_sequence("power", c=1.0, p=float(law[1:]), count=count)
        c, _, p = law.partition("*n^")
        if not _:
            raise ValueError
        return mu_sequence("power", c=float(c), p=float(p), count=count)
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"{key}: cannot parse mode spec {spec!r} ({exc})") from None


def read_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"config line {lineno}: expected key = value, got {raw.strip()!r}")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def thread_cap(default: int = 1) -> int:
    raw = os.environ.get("CATTANEO_THREADS", "")
    if not raw:
        return default
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"CATTANEO_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def fmt_real(x: Any) -> str:
    """17 significant digits; integers and strings pass through."""
    if x is None:
        return ""
    if isinstance(x, (bool, str)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt_real(v) for v in r])
    return buf.getvalue()


def json_text(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_text(path: str | None, text: str, stdout) -> None:
    if path is None or path == "-":
        stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)

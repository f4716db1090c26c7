"""Helpers for the extended real line [-inf, +inf].

Values are plain floats; ``nan`` never appears in a valid table.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from .errors import InputError

POS_INF = "+inf"
NEG_INF = "-inf"

_SENTINELS = {"+inf": math.inf, "inf": math.inf, "-inf": -math.inf}


def parse_ext(value: Any) -> float:
    """Parse a JSON number or an infinity sentinel string."""
    if isinstance(value, bool):
        raise InputError(f"boolean is not an extended real: {value!r}")
    if isinstance(value, (int, float)):
        x = float(value)
    elif isinstance(value, str) and value.strip().lower() in _SENTINELS:
        x = _SENTINELS[value.strip().lower()]
    else:
        raise InputError(f"not an extended real: {value!r}")
    if math.isnan(x):
        raise InputError("nan is not an extended real")
    return x


def encode_ext(x: float) -> float | str:
    """JSON-safe encoding; finite floats pass through unchanged."""
    x = float(x)
    if x == math.inf:
        return POS_INF
    if x == -math.inf:
        return NEG_INF
    return x


def as_table(values: Any) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if np.isnan(arr).any():
        raise InputError("table contains nan")
    return arr


def sub(a: float, b: float) -> float | None:
    """a - b on the extended line; ``None`` for the undefined inf - inf."""
    if math.isinf(a) and math.isinf(b) and (a > 0) == (b > 0):
        return None
    return a - b


def fmt(x: float | None) -> str:
    """Compact, lossless rendering for transcripts and digests."""
    if x is None:
        return "undefined"
    x = float(x)
    if math.isinf(x):
        return POS_INF if x > 0 else NEG_INF
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)

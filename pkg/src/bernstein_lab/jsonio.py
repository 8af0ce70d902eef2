"""Deterministic JSON emission: fixed field order, 17-significant-digit floats.

Identical objects always serialize to identical bytes, which is what makes
sweep outputs reproducible byte-for-byte. Dict insertion order is preserved,
floats are rendered with %.17g (full round-trip precision), and non-finite
floats are rejected rather than silently emitted as invalid JSON.
"""

from __future__ import annotations

import json
import math

__all__ = ["dumps", "dump_line"]


def _emit(obj) -> str:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite float {obj!r} cannot be serialized")
        return format(obj, ".17g")
    if isinstance(obj, dict):
        parts = (f"{json.dumps(str(k))}:{_emit(v)}" for k, v in obj.items())
        return "{" + ",".join(parts) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_emit(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return _emit(obj)


def dump_line(obj) -> str:
    return _emit(obj) + "\n"

"""Canonical JSON used for evidence hashes and the audit-log hash preimage.

UTF-8, keys sorted, no insignificant whitespace, numbers in shortest
round-trip form. Integral floats are written as integers (``1.0`` -> ``1``)
so that a value survives an export/import cycle byte-exactly.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any

_MAX_EXACT_INT_FLOAT = 2.0**53


def normalize(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite number {obj!r} has no canonical form")
        if obj.is_integer() and abs(obj) < _MAX_EXACT_INT_FLOAT:
            return int(obj)
        return obj
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            if not isinstance(k, str):
                raise TypeError(f"canonical JSON keys must be strings, got {k!r}")
            out[k] = normalize(v)
        return out
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    raise TypeError(f"cannot canonicalize {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    return json.dumps(
        normalize(obj),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    )


def canonical_bytes(obj: Any) -> bytes:
    return canonical_json(obj).encode("utf-8")


def sha256_hex(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def digest(obj: Any) -> str:
    """Lowercase hex SHA-256 of the canonical encoding of ``obj``."""
    return sha256_hex(canonical_bytes(obj))

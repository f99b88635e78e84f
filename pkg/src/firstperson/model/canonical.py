"""Canonical JSON encoding: byte-stable serialization for hashing.

Canonical form is UTF-8 JSON with lexicographically sorted keys, no
insignificant whitespace, and shortest round-trip decimal floats.
serialize(deserialize(serialize(x))) is byte-identical to serialize(x),
which is what makes segment digests platform-independent.
"""

from __future__ import annotations

import json
import math
from typing import Any


class CanonicalizationError(ValueError):
    """Raised when a document cannot be canonically serialized."""


_SCALARS = (str, int, float, bool, type(None))


def _check(value: Any, path: str) -> None:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return
    if isinstance(value, float):
        if not math.isfinite(value):
            raise CanonicalizationError(f"non-finite number at {path}: {value!r}")
        return
    if isinstance(value, int):
        return
    if isinstance(value, dict):
        for key, item in value.items():
            if not isinstance(key, str):
                raise CanonicalizationError(f"non-string key at {path}: {key!r}")
            _check(item, f"{path}.{key}")
        return
    if isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _check(item, f"{path}[{i}]")
        return
    raise CanonicalizationError(f"unserializable type at {path}: {type(value).__name__}")


def canonical_dumps(document: Any) -> str:
    """Canonical JSON text for ``document`` (plain dict/list/scalar tree)."""
    _check(document, "$")
    return json.dumps(
        document,
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    )


def canonical_serialize(document: Any) -> bytes:
    """Canonical UTF-8 bytes for ``document``."""
    return canonical_dumps(document).encode("utf-8")


def canonical_deserialize(data: bytes | str) -> Any:
    """Parse JSON produced by (or compatible with) canonical_serialize."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return json.loads(data)

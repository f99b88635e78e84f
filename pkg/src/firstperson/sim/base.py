"""Driver contract and the emission envelope+sidecar carrier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Protocol

import numpy as np

from ..model.streams import SampleEnvelope, StreamId

# Sidecar payloads all nest under this key so a single byte-scan proves no
# ground truth ever reached persistent storage.
SIDECAR_MARKER = "ground_truth"


class ConfigurationError(ValueError):
    """A driver cannot honor its configuration (e.g. unreachable byte target)."""


@dataclass(frozen=True)
class Emission:
    """One envelope plus transport-only extras that must never be persisted.

    ``sidecar`` carries scenario ground truth for mock analyzer clients;
    ``media`` carries raw media bytes destined for the content store.
    """

    envelope: SampleEnvelope
    sidecar: dict[str, Any] | None = None
    media: bytes | None = None


class SensorDriver(Protocol):
    """Pull-based simulated sensor.

    next_batch(now_ms) returns every emission due strictly after the previous
    poll and at or before ``now_ms``, in t_ms order, with gap-free per-stream
    seq counters. Drivers never emit a timestamp in the future.
    """

    streams: tuple[StreamId, ...]

    def next_batch(self, now_ms: int) -> list[Emission]:
        ...


def driver_rng(seed: int, stream: StreamId) -> np.random.Generator:
    """Independent, reproducible RNG stream per (scenario seed, stream)."""
    from ..model.streams import STREAM_ORDER

    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(STREAM_ORDER[stream],)))

"""Capture loop: polls drivers on a clock and hands a sorted stream to a sink.

The merged stream is ordered by (t_ms, stream declaration order, seq). Each
driver only emits timestamps in (previous poll, now], so sorting within each
tick keeps the global order exact. Virtual mode advances the clock without
sleeping; real mode paces ticks against the monotonic clock.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from ..model.canonical import canonical_serialize
from ..model.streams import STREAM_ORDER, StreamId
from .audio import AudioDriver
from .base import Emission, SensorDriver
from .camera import CameraDriver
from .eeg import EegDriver
from .gsr import GsrDriver
from .headset import HeadsetStateDriver
from .scenario import ScenarioScript

DEFAULT_TICK_MS = 250


@dataclass
class StreamStats:
    count: int = 0
    bytes: int = 0


@dataclass
class RunReport:
    duration_ms: int = 0
    per_stream: dict[str, StreamStats] = field(default_factory=dict)
    aborted: bool = False
    error: str | None = None

    def count(self, stream: StreamId) -> int:
        stats = self.per_stream.get(stream.value)
        return stats.count if stats else 0

    def kb_s(self, stream: StreamId) -> float:
        stats = self.per_stream.get(stream.value)
        if not stats or self.duration_ms <= 0:
            return 0.0
        return stats.bytes / self.duration_ms  # bytes/ms == KB/s

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "duration_ms": self.duration_ms,
            "aborted": self.aborted,
            "error": self.error,
            "per_stream": {
                stream: {"count": stats.count, "bytes": stats.bytes, "kb_s": self.kb_s(StreamId(stream))}
                for stream, stats in sorted(self.per_stream.items())
            },
        }


class SinkError(RuntimeError):
    """Wraps a sink failure together with the partial run report."""

    def __init__(self, cause: Exception, report: RunReport) -> None:
        super().__init__(str(cause))
        self.report = report


def build_drivers(config: dict[str, Any], scenario: ScenarioScript) -> list[SensorDriver]:
    drivers: list[SensorDriver] = []
    if config["eeg"]["enabled"]:
        drivers.append(EegDriver(config, scenario))
    if config["audio"]["enabled"]:
        drivers.append(AudioDriver(config, scenario))
    if config["image"]["enabled"]:
        drivers.append(CameraDriver(config, scenario))
    if config["gsr"]["enabled"]:
        drivers.append(GsrDriver(config, scenario))
    if config["headset"]["enabled"]:
        drivers.append(HeadsetStateDriver(config, scenario))
    return drivers


def run_drivers(
    drivers: Iterable[SensorDriver],
    scenario: ScenarioScript,
    sink: Callable[[Emission], None],
    realtime: bool = False,
    tick_ms: int = DEFAULT_TICK_MS,
    should_stop: Callable[[], bool] | None = None,
) -> RunReport:
    """Poll drivers tick-by-tick and deliver a t_ms-sorted merged stream.

    Per-stream counts and byte totals (canonical envelope bytes plus media
    bytes) are accumulated into the report. A sink exception aborts the run;
    the partial report is attached to the raised SinkError.
    """
    drivers = list(drivers)
    report = RunReport()
    duration = scenario.duration_ms
    origin = time.monotonic() if realtime else None
    now = 0
    stopped_early = False

    while now < duration:
        now = min(now + tick_ms, duration)
        if realtime and origin is not None:
            target = origin + now / 1000.0
            delay = target - time.monotonic()
            if delay > 0:
                time.sleep(delay)
        batch: list[Emission] = []
        for driver in drivers:
            batch.extend(driver.next_batch(now))
        batch.sort(key=lambda e: (e.envelope.t_ms, STREAM_ORDER[e.envelope.stream], e.envelope.seq_in_stream))
        for emission in batch:
            stream = emission.envelope.stream.value
            stats = report.per_stream.setdefault(stream, StreamStats())
            stats.count += 1
            stats.bytes += len(canonical_serialize(emission.envelope.to_jsonable()))
            if emission.media is not None:
                stats.bytes += len(emission.media)
            try:
                sink(emission)
            except Exception as exc:  # noqa: BLE001 - abort contract
                report.duration_ms = now
                report.aborted = True
                report.error = str(exc)
                raise SinkError(exc, report) from exc
        if should_stop is not None and should_stop():
            stopped_early = True
            break

    report.duration_ms = now if stopped_early else duration
    return report

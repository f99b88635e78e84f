"""Data-volume accounting: achieved rates, day extrapolation, projections.

Achieved KB/s per stream is measured from persisted bytes (each envelope's
canonical size plus its stream's unique media bytes). The per-day
extrapolations are computed from the session's configured target rates:
they reproduce the reference profile's volume arithmetic (a full profile of
664.037 KB/s is ~38.2 GB per 16-hour day; the text-oriented profile without
images, audio, raw EEG and raw GSR is ~0.81 GB). Measured-rate
extrapolations are reported alongside for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .model.canonical import canonical_serialize
from .model.config import (
    BYTES_PER_GB,
    BYTES_PER_KB,
    DEFAULT_TARGETS_KB_S,
    SECONDS_PER_RECORDING_DAY,
    TEXT_PROFILE_EXCLUDED,
)
from .model.streams import StreamId
from .store import SessionReader


@dataclass
class StreamRate:
    bytes: int = 0
    kb_s: float = 0.0
    target_kb_s: float = 0.0

    def to_jsonable(self) -> dict[str, Any]:
        return {"bytes": self.bytes, "kb_s": self.kb_s, "target_kb_s": self.target_kb_s}


@dataclass
class RateReport:
    session_id: str
    duration_ms: int
    per_stream: dict[str, StreamRate]
    framing_bytes: int
    total_bytes: int
    total_kb_s: float
    extrapolated_full_day_gb: float
    extrapolated_text_day_gb: float
    measured_full_day_gb: float
    measured_text_day_gb: float

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "session_id": self.session_id,
            "duration_ms": self.duration_ms,
            "per_stream": {k: v.to_jsonable() for k, v in sorted(self.per_stream.items())},
            "framing_bytes": self.framing_bytes,
            "total_bytes": self.total_bytes,
            "total_kb_s": self.total_kb_s,
            "extrapolated_full_day_gb": self.extrapolated_full_day_gb,
            "extrapolated_text_day_gb": self.extrapolated_text_day_gb,
            "measured_full_day_gb": self.measured_full_day_gb,
            "measured_text_day_gb": self.measured_text_day_gb,
        }


def daily_gb(mode: str, targets_kb_s: dict[str, float] | None = None) -> float:
    """GB recorded per 16-hour day at the given target rates."""
    targets = targets_kb_s or DEFAULT_TARGETS_KB_S
    if mode == "full":
        rate = sum(targets.values())
    elif mode == "text":
        rate = sum(v for k, v in targets.items() if k not in TEXT_PROFILE_EXCLUDED)
    else:
        raise ValueError(f"unknown profile mode {mode!r} (expected 'full' or 'text')")
    return rate * BYTES_PER_KB * SECONDS_PER_RECORDING_DAY / BYTES_PER_GB


@dataclass(frozen=True)
class Projection:
    target_gb: float
    mode: str
    days: float
    daily_gb: float

    def to_jsonable(self) -> dict[str, Any]:
        return {"target_gb": self.target_gb, "mode": self.mode, "days": self.days, "daily_gb": self.daily_gb}


def project_recording_days(
    target_gb: float, mode: str, targets_kb_s: dict[str, float] | None = None
) -> Projection:
    """How many 16-hour recording days reach ``target_gb`` in this profile."""
    if target_gb <= 0:
        raise ValueError("target_gb must be positive")
    per_day = daily_gb(mode, targets_kb_s)
    return Projection(target_gb=target_gb, mode=mode, days=target_gb / per_day, daily_gb=per_day)


# Training-data scales used by the standard projection table.
PROJECTION_TABLE_ROWS = (("GPT-1", 5.0), ("GPT-2", 40.0), ("GPT-3", 46080.0))


def projection_table(targets_kb_s: dict[str, float] | None = None) -> list[dict[str, Any]]:
    rows = []
    for label, gb in PROJECTION_TABLE_ROWS:
        rows.append(
            {
                "model": label,
                "target_gb": gb,
                "days_full": project_recording_days(gb, "full", targets_kb_s).days,
                "days_text": project_recording_days(gb, "text", targets_kb_s).days,
            }
        )
    return rows


def rate_report(reader: SessionReader) -> RateReport:
    """Account every persisted byte of a session to its stream.

    Identity: sum(per-stream bytes) + framing_bytes == segment files +
    unique media files on disk, exactly. Media referenced by several
    envelopes of a stream is counted once (content-addressed store).
    """
    manifest = reader.manifest
    duration_ms = manifest.duration_ms
    if duration_ms <= 0:
        raise ValueError("session has no recorded duration; close it before reporting")

    per_stream: dict[str, StreamRate] = {s.value: StreamRate() for s in StreamId}
    targets = manifest.config.get("targets_kb_s", {})
    for stream, rate in per_stream.items():
        rate.target_kb_s = float(targets.get(stream, 0.0))

    envelope_bytes_total = 0
    media_seen: dict[str, set[str]] = {s.value: set() for s in StreamId}
    media_budget: dict[tuple[str, str], int] = {}
    for sample in reader.iter_sample_dicts():
        stream = sample["stream"]
        size = len(canonical_serialize(sample))
        per_stream[stream].bytes += size
        envelope_bytes_total += size
        payload = sample.get("payload", {})
        media = payload.get("media")
        if media and media["content_hash"] not in media_seen[stream]:
            media_seen[stream].add(media["content_hash"])
            media_budget[(stream, media["content_hash"])] = media["byte_len"]

    for (stream, _), size in media_budget.items():
        per_stream[stream].bytes += size

    segment_file_bytes = sum(entry.byte_len for entry in manifest.segments)
    framing_bytes = segment_file_bytes - envelope_bytes_total
    total_bytes = sum(rate.bytes for rate in per_stream.values()) + framing_bytes

    for rate in per_stream.values():
        rate.kb_s = rate.bytes / duration_ms  # bytes per ms == KB/s

    measured_total_kb_s = total_bytes / duration_ms
    measured_text_kb_s = sum(
        rate.kb_s for stream, rate in per_stream.items() if stream not in TEXT_PROFILE_EXCLUDED
    )
    day_factor = BYTES_PER_KB * SECONDS_PER_RECORDING_DAY / BYTES_PER_GB

    return RateReport(
        session_id=manifest.session_id,
        duration_ms=duration_ms,
        per_stream=per_stream,
        framing_bytes=framing_bytes,
        total_bytes=total_bytes,
        total_kb_s=measured_total_kb_s,
        extrapolated_full_day_gb=daily_gb("full", {k: float(v) for k, v in targets.items()}),
        extrapolated_text_day_gb=daily_gb("text", {k: float(v) for k, v in targets.items()}),
        measured_full_day_gb=measured_total_kb_s * day_factor,
        measured_text_day_gb=measured_text_kb_s * day_factor,
    )

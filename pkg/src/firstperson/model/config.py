"""Session configuration: nominal rates, byte-rate targets, rotation, phrases.

Defaults reproduce the reference recording profile: 14-channel EEG at 128 Hz,
one frame per second, 1 Hz GSR, 10 s audio chunks, 2 s / 0.5 s band-power
windows, and 2 Hz headset state. Target byte rates per stream default to the
reference profile's KB/s column and drive both media sizing and the day-volume
projections.
"""

from __future__ import annotations

import copy
import math
from typing import Any

from .streams import StreamId

SCHEMA_VERSION = "1.0.0"

# KB/s targets for the reference profile (KB = 1000 bytes).
DEFAULT_TARGETS_KB_S: dict[str, float] = {
    StreamId.EEG_RAW.value: 30.0,
    StreamId.AUDIO_CHUNK.value: 20.0,
    StreamId.IMAGE_FRAME.value: 600.0,
    StreamId.GSR.value: 0.01,
    StreamId.EEG_BANDPOWER.value: 8.0,
    StreamId.FACIAL_EXPRESSION.value: 4.0,
    StreamId.COGNITION.value: 0.02,
    StreamId.AUDIO_TEXT.value: 0.003,
    StreamId.SPEECH_SENTIMENT.value: 0.002,
    StreamId.DES_REPORT.value: 0.001,
    StreamId.IMAGE_TEXT.value: 0.001,
    StreamId.IMAGE_LABELS.value: 2.0,
}

# Streams excluded from the reduced, text-oriented accounting profile.
TEXT_PROFILE_EXCLUDED = frozenset(
    {
        StreamId.IMAGE_FRAME.value,
        StreamId.AUDIO_CHUNK.value,
        StreamId.EEG_RAW.value,
        StreamId.GSR.value,
    }
)

SECONDS_PER_RECORDING_DAY = 16 * 3600
BYTES_PER_KB = 1000
BYTES_PER_GB = 10**9

BLUR_MODES = ("pixelate", "solid")

DEFAULT_CONFIG: dict[str, Any] = {
    "schema_version": SCHEMA_VERSION,
    "subject_id": "anon-subject",
    "eeg": {"enabled": True, "rate": 128.0, "noise_uv": 18.0},
    "gsr": {"enabled": True, "rate": 1.0, "baseline_us": 5.0, "walk_step_us": 0.05},
    "image": {"enabled": True, "rate": 1.0, "width_px": 640, "height_px": 480},
    "audio": {"enabled": True, "chunk_s": 10.0},
    "headset": {"enabled": True, "rate": 2.0},
    "bandpower": {"enabled": True, "window_s": 2.0, "hop_s": 0.5},
    "analysis": {
        "transcribe": True,
        "sentiment": True,
        "image_text": True,
        "image_labels": True,
    },
    "targets_kb_s": dict(DEFAULT_TARGETS_KB_S),
    "rotation": {"max_bytes": 16_000_000, "max_duration_s": 60.0},
    "des": {"start_phrase": "start ziggy", "end_phrase": "end ziggy"},
    "blur": {"mode": "pixelate", "cell_px": 16},
}


def default_config() -> dict[str, Any]:
    return copy.deepcopy(DEFAULT_CONFIG)


def merge_config(overrides: dict[str, Any] | None) -> dict[str, Any]:
    """Overlay ``overrides`` onto the defaults (one level of section nesting)."""
    config = default_config()
    if not overrides:
        return config
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(config.get(key), dict):
            config[key].update(value)
        else:
            config[key] = value
    return config


class ConfigViolation:
    __slots__ = ("path", "rule", "message")

    def __init__(self, path: str, rule: str, message: str) -> None:
        self.path = path
        self.rule = rule
        self.message = message

    def to_jsonable(self) -> dict[str, str]:
        return {"path": self.path, "rule": self.rule, "message": self.message}

    def __repr__(self) -> str:  # pragma: no cover
        return f"ConfigViolation({self.path}: {self.rule})"


def _positive(config: dict, section: str, key: str, out: list[ConfigViolation]) -> None:
    value = config.get(section, {}).get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(float(value)) or value <= 0:
        out.append(ConfigViolation(f"{section}.{key}", "positive number", f"{section}.{key} must be > 0, got {value!r}"))


def validate_config(config: dict[str, Any]) -> list[ConfigViolation]:
    """Structural and range checks; an empty list means the config is usable."""
    out: list[ConfigViolation] = []
    if not isinstance(config, dict):
        return [ConfigViolation("$", "object", "config must be a JSON object")]

    version = config.get("schema_version")
    if not isinstance(version, str) or not version:
        out.append(ConfigViolation("schema_version", "required string", "schema_version missing"))

    subject = config.get("subject_id")
    if not isinstance(subject, str) or not subject:
        out.append(ConfigViolation("subject_id", "required string", "subject_id must be a non-empty string"))

    for section, key in (
        ("eeg", "rate"),
        ("gsr", "rate"),
        ("image", "rate"),
        ("audio", "chunk_s"),
        ("headset", "rate"),
        ("bandpower", "window_s"),
        ("bandpower", "hop_s"),
    ):
        _positive(config, section, key, out)

    for key in ("width_px", "height_px"):
        value = config.get("image", {}).get(key)
        if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
            out.append(ConfigViolation(f"image.{key}", "positive integer", f"image.{key} must be a positive integer"))

    noise = config.get("eeg", {}).get("noise_uv")
    if not isinstance(noise, (int, float)) or isinstance(noise, bool) or not math.isfinite(float(noise)) or noise < 0:
        out.append(ConfigViolation("eeg.noise_uv", "non-negative number", "eeg.noise_uv must be >= 0"))

    targets = config.get("targets_kb_s")
    if not isinstance(targets, dict):
        out.append(ConfigViolation("targets_kb_s", "object", "targets_kb_s must map stream ids to KB/s"))
    else:
        valid_ids = {s.value for s in StreamId}
        for key, value in targets.items():
            if key not in valid_ids:
                out.append(ConfigViolation(f"targets_kb_s.{key}", "known stream", f"unknown stream id {key!r}"))
            elif not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(float(value)) or value <= 0:
                out.append(ConfigViolation(f"targets_kb_s.{key}", "positive number", "target KB/s must be > 0"))
        for stream in valid_ids:
            if stream not in targets:
                out.append(ConfigViolation(f"targets_kb_s.{stream}", "required", f"missing target for {stream}"))

    rotation = config.get("rotation", {})
    max_bytes = rotation.get("max_bytes")
    if not isinstance(max_bytes, int) or isinstance(max_bytes, bool) or max_bytes <= 0:
        out.append(ConfigViolation("rotation.max_bytes", "positive integer", "rotation.max_bytes must be > 0"))
    _positive(config, "rotation", "max_duration_s", out)

    des = config.get("des", {})
    start = des.get("start_phrase")
    end = des.get("end_phrase")
    if not isinstance(start, str) or not start.strip():
        out.append(ConfigViolation("des.start_phrase", "non-empty string", "start phrase required"))
    if not isinstance(end, str) or not end.strip():
        out.append(ConfigViolation("des.end_phrase", "non-empty string", "end phrase required"))
    if isinstance(start, str) and isinstance(end, str):
        if " ".join(start.lower().split()) == " ".join(end.lower().split()):
            out.append(ConfigViolation("des.end_phrase", "distinct phrases", "start and end phrases must differ"))

    blur = config.get("blur", {})
    if blur.get("mode") not in BLUR_MODES:
        out.append(ConfigViolation("blur.mode", f"one of {BLUR_MODES}", f"unknown blur mode {blur.get('mode')!r}"))
    cell = blur.get("cell_px")
    if not isinstance(cell, int) or isinstance(cell, bool) or cell <= 0:
        out.append(ConfigViolation("blur.cell_px", "positive integer", "blur.cell_px must be > 0"))

    return out


def enabled_streams(config: dict[str, Any]) -> set[StreamId]:
    """Stream ids a session with this config can produce."""
    streams: set[StreamId] = set()
    if config["eeg"]["enabled"]:
        streams.add(StreamId.EEG_RAW)
        if config["bandpower"]["enabled"]:
            streams.add(StreamId.EEG_BANDPOWER)
    if config["gsr"]["enabled"]:
        streams.add(StreamId.GSR)
    if config["image"]["enabled"]:
        streams.add(StreamId.IMAGE_FRAME)
        if config["analysis"]["image_text"]:
            streams.add(StreamId.IMAGE_TEXT)
        if config["analysis"]["image_labels"]:
            streams.add(StreamId.IMAGE_LABELS)
    if config["audio"]["enabled"]:
        streams.add(StreamId.AUDIO_CHUNK)
        if config["analysis"]["transcribe"]:
            streams.add(StreamId.AUDIO_TEXT)
            streams.add(StreamId.DES_REPORT)
            if config["analysis"]["sentiment"]:
                streams.add(StreamId.SPEECH_SENTIMENT)
    if config["headset"]["enabled"]:
        streams.add(StreamId.FACIAL_EXPRESSION)
        streams.add(StreamId.COGNITION)
    return streams

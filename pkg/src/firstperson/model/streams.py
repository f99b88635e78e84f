"""The twelve recorder streams and their payload types.

Every datum in the pipeline is a SampleEnvelope: one timestamped payload on
one stream. Payload classes are immutable values; constructing an invalid
one raises ValueError, and the same rules are re-checked structurally by
firstperson.model.validation for documents read from disk.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Union


class StreamId(str, Enum):
    """Closed set of streams. Declaration order is the cross-stream tie-break."""

    EEG_RAW = "eeg-raw"
    AUDIO_CHUNK = "audio-chunk"
    IMAGE_FRAME = "image-frame"
    GSR = "gsr"
    EEG_BANDPOWER = "eeg-bandpower"
    FACIAL_EXPRESSION = "facial-expression"
    COGNITION = "cognition"
    AUDIO_TEXT = "audio-text"
    SPEECH_SENTIMENT = "speech-sentiment"
    DES_REPORT = "des-report"
    IMAGE_TEXT = "image-text"
    IMAGE_LABELS = "image-labels"


STREAM_ORDER: dict[StreamId, int] = {s: i for i, s in enumerate(StreamId)}

EEG_CHANNELS = 14
BAND_NAMES = ("theta", "alpha", "beta_l", "beta_h", "gamma")
SENTIMENT_KEYS = ("positive", "negative", "mixed", "neutral")
COGNITION_KEYS = ("engagement", "excitement", "stress", "relaxation", "interest", "focus")
EYE_ACTIONS = ("neutral", "blink", "wink-left", "wink-right", "look-left", "look-right")
UPPER_FACE_ACTIONS = ("neutral", "surprise", "frown")
LOWER_FACE_ACTIONS = ("neutral", "smile", "clench", "smirk-left", "smirk-right")
SPEAKERS = ("wearer", "other")

SIMPLEX_TOLERANCE = 1e-6

_HEX64 = re.compile(r"^[0-9a-f]{64}$")


def _finite(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def _unit(value: float, name: str) -> float:
    value = _finite(value, name)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class Rect:
    """Pixel rectangle (top-left corner + extent)."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        for name in ("x", "y", "w", "h"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError(f"rect.{name} must be an integer")
        if self.x < 0 or self.y < 0 or self.w <= 0 or self.h <= 0:
            raise ValueError("rect must have non-negative origin and positive extent")

    def to_jsonable(self) -> dict[str, int]:
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h}

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "Rect":
        return cls(x=data["x"], y=data["y"], w=data["w"], h=data["h"])


@dataclass(frozen=True)
class MediaRef:
    """Content-addressed pointer to a sidecar media file inside the session."""

    relative_path: str
    content_hash: str
    byte_len: int

    def __post_init__(self) -> None:
        if not self.relative_path or self.relative_path.startswith("/") or ".." in self.relative_path:
            raise ValueError("media relative_path must be a clean session-relative path")
        if not _HEX64.match(self.content_hash):
            raise ValueError("content_hash must be 64 lowercase hex chars")
        if self.byte_len < 0:
            raise ValueError("byte_len must be non-negative")

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "relative_path": self.relative_path,
            "content_hash": self.content_hash,
            "byte_len": self.byte_len,
        }

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "MediaRef":
        return cls(
            relative_path=data["relative_path"],
            content_hash=data["content_hash"],
            byte_len=data["byte_len"],
        )


@dataclass(frozen=True)
class EegRawPayload:
    channels: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.channels) != EEG_CHANNELS:
            raise ValueError(f"eeg-raw requires exactly {EEG_CHANNELS} channels")
        object.__setattr__(
            self, "channels", tuple(_finite(c, f"channels[{i}]") for i, c in enumerate(self.channels))
        )

    def to_jsonable(self) -> dict[str, Any]:
        return {"channels": list(self.channels)}

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "EegRawPayload":
        return cls(channels=tuple(data["channels"]))


@dataclass(frozen=True)
class GsrPayload:
    conductance_us: float

    def __post_init__(self) -> None:
        v = _finite(self.conductance_us, "conductance_us")
        if v <= 0:
            raise ValueError("conductance_us must be > 0")
        object.__setattr__(self, "conductance_us", v)

    def to_jsonable(self) -> dict[str, Any]:
        return {"conductance_us": self.conductance_us}

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "GsrPayload":
        return cls(conductance_us=data["conductance_us"])


@dataclass(frozen=True)
class ImageFramePayload:
    media: MediaRef
    width_px: int
    height_px: int
    blurred_regions: tuple[Rect, ...] = ()

    def __post_init__(self) -> None:
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("frame dimensions must be positive")
        object.__setattr__(self, "blurred_regions", tuple(self.blurred_regions))
        for i, rect in enumerate(self.blurred_regions):
            if rect.x + rect.w > self.width_px or rect.y + rect.h > self.height_px:
                raise ValueError(f"blurred_regions[{i}] exceeds frame bounds")

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "media": self.media.to_jsonable(),
            "width_px": self.width_px,
            "height_px": self.height_px,
            "blurred_regions": [r.to_jsonable() for r in self.blurred_regions],
        }

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "ImageFramePayload":
        return cls(
            media=MediaRef.from_jsonable(data["media"]),
            width_px=data["width_px"],
            height_px=data["height_px"],
            blurred_regions=tuple(Rect.from_jsonable(r) for r in data["blurred_regions"]),
        )


@dataclass(frozen=True)
class AudioChunkPayload:
    media: MediaRef
    duration_ms: int

    def __post_init__(self) -> None:
        if self.duration_ms <= 0:
            raise ValueError("duration_ms must be positive")

    def to_jsonable(self) -> dict[str, Any]:
        return {"media": self.media.to_jsonable(), "duration_ms": self.duration_ms}

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "AudioChunkPayload":
        return cls(media=MediaRef.from_jsonable(data["media"]), duration_ms=data["duration_ms"])


@dataclass(frozen=True)
class ChannelBandPower:
    theta: float
    alpha: float
    beta_l: float
    beta_h: float
    gamma: float

    def __post_init__(self) -> None:
        for name in BAND_NAMES:
            v = _finite(getattr(self, name), name)
            if v < 0:
                raise ValueError(f"band power {name} must be non-negative")
            object.__setattr__(self, name, v)

    def to_jsonable(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in BAND_NAMES}

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "ChannelBandPower":
        return cls(**{name: data[name] for name in BAND_NAMES})


@dataclass(frozen=True)
class BandPowerPayload:
    per_channel: tuple[ChannelBandPower, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_channel", tuple(self.per_channel))
        if len(self.per_channel) != EEG_CHANNELS:
            raise ValueError(f"band power requires {EEG_CHANNELS} channel entries")

    def to_jsonable(self) -> dict[str, Any]:
        return {"per_channel": [c.to_jsonable() for c in self.per_channel]}

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "BandPowerPayload":
        return cls(per_channel=tuple(ChannelBandPower.from_jsonable(c) for c in data["per_channel"]))


@dataclass(frozen=True)
class FaceAction:
    action: str
    power: float

    def to_jsonable(self) -> dict[str, Any]:
        return {"action": self.action, "power": self.power}

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "FaceAction":
        return cls(action=data["action"], power=data["power"])


@dataclass(frozen=True)
class FacialExpressionPayload:
    eye_action: str
    upper_face: FaceAction
    lower_face: FaceAction

    def __post_init__(self) -> None:
        if self.eye_action not in EYE_ACTIONS:
            raise ValueError(f"unknown eye_action {self.eye_action!r}")
        if self.upper_face.action not in UPPER_FACE_ACTIONS:
            raise ValueError(f"unknown upper_face action {self.upper_face.action!r}")
        if self.lower_face.action not in LOWER_FACE_ACTIONS:
            raise ValueError(f"unknown lower_face action {self.lower_face.action!r}")
        _unit(self.upper_face.power, "upper_face.power")
        _unit(self.lower_face.power, "lower_face.power")

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "eye_action": self.eye_action,
            "upper_face": self.upper_face.to_jsonable(),
            "lower_face": self.lower_face.to_jsonable(),
        }

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "FacialExpressionPayload":
        return cls(
            eye_action=data["eye_action"],
            upper_face=FaceAction.from_jsonable(data["upper_face"]),
            lower_face=FaceAction.from_jsonable(data["lower_face"]),
        )


@dataclass(frozen=True)
class CognitionPayload:
    engagement: float
    excitement: float
    stress: float
    relaxation: float
    interest: float
    focus: float

    def __post_init__(self) -> None:
        for name in COGNITION_KEYS:
            object.__setattr__(self, name, _unit(getattr(self, name), name))

    def to_jsonable(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in COGNITION_KEYS}

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "CognitionPayload":
        return cls(**{name: data[name] for name in COGNITION_KEYS})


@dataclass(frozen=True)
class TimeSpan:
    start_ms: int
    end_ms: int

    def __post_init__(self) -> None:
        if self.start_ms < 0 or self.end_ms < self.start_ms:
            raise ValueError("span requires 0 <= start_ms <= end_ms")

    def to_jsonable(self) -> dict[str, int]:
        return {"start_ms": self.start_ms, "end_ms": self.end_ms}

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "TimeSpan":
        return cls(start_ms=data["start_ms"], end_ms=data["end_ms"])


@dataclass(frozen=True)
class TranscriptPayload:
    text: str
    speaker: str
    span: TimeSpan

    def __post_init__(self) -> None:
        if self.speaker not in SPEAKERS:
            raise ValueError(f"speaker must be one of {SPEAKERS}")

    def to_jsonable(self) -> dict[str, Any]:
        return {"text": self.text, "speaker": self.speaker, "span": self.span.to_jsonable()}

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "TranscriptPayload":
        return cls(text=data["text"], speaker=data["speaker"], span=TimeSpan.from_jsonable(data["span"]))


@dataclass(frozen=True)
class SentimentPayload:
    positive: float
    negative: float
    mixed: float
    neutral: float
    ref_transcript_seq: int

    def __post_init__(self) -> None:
        total = 0.0
        for name in SENTIMENT_KEYS:
            v = _finite(getattr(self, name), name)
            if v < 0:
                raise ValueError(f"sentiment {name} must be non-negative")
            object.__setattr__(self, name, v)
            total += v
        if abs(total - 1.0) > SIMPLEX_TOLERANCE:
            raise ValueError(f"sentiment values must sum to 1 +/- {SIMPLEX_TOLERANCE}, got {total}")
        if self.ref_transcript_seq < 0:
            raise ValueError("ref_transcript_seq must be non-negative")

    def to_jsonable(self) -> dict[str, Any]:
        out: dict[str, Any] = {name: getattr(self, name) for name in SENTIMENT_KEYS}
        out["ref_transcript_seq"] = self.ref_transcript_seq
        return out

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "SentimentPayload":
        return cls(
            **{name: data[name] for name in SENTIMENT_KEYS},
            ref_transcript_seq=data["ref_transcript_seq"],
        )


@dataclass(frozen=True)
class DesReportPayload:
    text: str
    span: TimeSpan
    terminated: bool

    def to_jsonable(self) -> dict[str, Any]:
        return {"text": self.text, "span": self.span.to_jsonable(), "terminated": self.terminated}

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "DesReportPayload":
        return cls(text=data["text"], span=TimeSpan.from_jsonable(data["span"]), terminated=data["terminated"])


@dataclass(frozen=True)
class Detection:
    value: str
    confidence: float
    box: Rect

    def __post_init__(self) -> None:
        _unit(self.confidence, "confidence")

    def to_jsonable(self) -> dict[str, Any]:
        return {"value": self.value, "confidence": self.confidence, "box": self.box.to_jsonable()}

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "Detection":
        return cls(value=data["value"], confidence=data["confidence"], box=Rect.from_jsonable(data["box"]))


@dataclass(frozen=True)
class ImageTextPayload:
    detections: tuple[Detection, ...]
    ref_frame_seq: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "detections", tuple(self.detections))
        if self.ref_frame_seq < 0:
            raise ValueError("ref_frame_seq must be non-negative")

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "detections": [d.to_jsonable() for d in self.detections],
            "ref_frame_seq": self.ref_frame_seq,
        }

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "ImageTextPayload":
        return cls(
            detections=tuple(Detection.from_jsonable(d) for d in data["detections"]),
            ref_frame_seq=data["ref_frame_seq"],
        )


@dataclass(frozen=True)
class ImageLabelsPayload(ImageTextPayload):
    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "ImageLabelsPayload":
        return cls(
            detections=tuple(Detection.from_jsonable(d) for d in data["detections"]),
            ref_frame_seq=data["ref_frame_seq"],
        )


Payload = Union[
    EegRawPayload,
    GsrPayload,
    ImageFramePayload,
    AudioChunkPayload,
    BandPowerPayload,
    FacialExpressionPayload,
    CognitionPayload,
    TranscriptPayload,
    SentimentPayload,
    DesReportPayload,
    ImageTextPayload,
    ImageLabelsPayload,
]

PAYLOAD_TYPES: dict[StreamId, type] = {
    StreamId.EEG_RAW: EegRawPayload,
    StreamId.AUDIO_CHUNK: AudioChunkPayload,
    StreamId.IMAGE_FRAME: ImageFramePayload,
    StreamId.GSR: GsrPayload,
    StreamId.EEG_BANDPOWER: BandPowerPayload,
    StreamId.FACIAL_EXPRESSION: FacialExpressionPayload,
    StreamId.COGNITION: CognitionPayload,
    StreamId.AUDIO_TEXT: TranscriptPayload,
    StreamId.SPEECH_SENTIMENT: SentimentPayload,
    StreamId.DES_REPORT: DesReportPayload,
    StreamId.IMAGE_TEXT: ImageTextPayload,
    StreamId.IMAGE_LABELS: ImageLabelsPayload,
}


@dataclass(frozen=True)
class SampleEnvelope:
    """One timestamped datum on one stream; the universal pipeline currency."""

    stream: StreamId
    t_ms: int
    seq_in_stream: int
    payload: Payload

    def __post_init__(self) -> None:
        if not isinstance(self.stream, StreamId):
            object.__setattr__(self, "stream", StreamId(self.stream))
        if self.t_ms < 0:
            raise ValueError("t_ms must be non-negative")
        if self.seq_in_stream < 0:
            raise ValueError("seq_in_stream must be non-negative")
        expected = PAYLOAD_TYPES[self.stream]
        if type(self.payload) is not expected:
            raise ValueError(
                f"payload type {type(self.payload).__name__} does not match stream {self.stream.value}"
            )

    def sort_key(self) -> tuple[int, int, int]:
        return (self.t_ms, STREAM_ORDER[self.stream], self.seq_in_stream)

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "stream": self.stream.value,
            "t_ms": self.t_ms,
            "seq_in_stream": self.seq_in_stream,
            "payload": self.payload.to_jsonable(),
        }

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "SampleEnvelope":
        stream = StreamId(data["stream"])
        payload = PAYLOAD_TYPES[stream].from_jsonable(data["payload"])
        return cls(
            stream=stream,
            t_ms=data["t_ms"],
            seq_in_stream=data["seq_in_stream"],
            payload=payload,
        )

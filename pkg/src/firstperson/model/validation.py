"""Structural validation of segment and manifest documents.

Works on parsed JSON (untrusted input from disk or the API); reports every
violated rule with the offending path instead of raising. Constructing the
typed objects in firstperson.model.streams enforces the same rules for
in-process data.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Any

from .config import validate_config
from .streams import (
    BAND_NAMES,
    COGNITION_KEYS,
    EEG_CHANNELS,
    EYE_ACTIONS,
    LOWER_FACE_ACTIONS,
    SENTIMENT_KEYS,
    SIMPLEX_TOLERANCE,
    SPEAKERS,
    STREAM_ORDER,
    UPPER_FACE_ACTIONS,
    StreamId,
)

_HEX64 = re.compile(r"^[0-9a-f]{64}$")
_UUID = re.compile(r"^[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}$")


@dataclass(frozen=True)
class Violation:
    path: str
    rule: str
    message: str

    def to_jsonable(self) -> dict[str, str]:
        return {"path": self.path, "rule": self.rule, "message": self.message}


class ValidationReport:
    def __init__(self) -> None:
        self.violations: list[Violation] = []

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, path: str, rule: str, message: str) -> None:
        self.violations.append(Violation(path, rule, message))

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)

    def to_jsonable(self) -> list[dict[str, str]]:
        return [v.to_jsonable() for v in self.violations]

    def __repr__(self) -> str:  # pragma: no cover
        return f"ValidationReport({len(self.violations)} violations)"


def _is_num(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(float(v))


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _require(report: ValidationReport, obj: Any, keys: tuple[str, ...], path: str) -> bool:
    if not isinstance(obj, dict):
        report.add(path, "object", f"expected object, got {type(obj).__name__}")
        return False
    ok = True
    for key in keys:
        if key not in obj:
            report.add(f"{path}.{key}" if path else key, "required", f"missing field {key!r}")
            ok = False
    return ok


def _check_unit(report: ValidationReport, value: Any, path: str) -> None:
    if not _is_num(value) or not 0.0 <= float(value) <= 1.0:
        report.add(path, "range [0,1]", f"expected a number in [0, 1], got {value!r}")


def _check_rect(report: ValidationReport, rect: Any, path: str) -> None:
    if not _require(report, rect, ("x", "y", "w", "h"), path):
        return
    for key in ("x", "y", "w", "h"):
        if not _is_int(rect[key]):
            report.add(f"{path}.{key}", "integer", "rect coordinates must be integers")
            return
    if rect["x"] < 0 or rect["y"] < 0 or rect["w"] <= 0 or rect["h"] <= 0:
        report.add(path, "positive extent", "rect needs non-negative origin and positive extent")


def _check_media(report: ValidationReport, media: Any, path: str) -> None:
    if not _require(report, media, ("relative_path", "content_hash", "byte_len"), path):
        return
    rel = media["relative_path"]
    if not isinstance(rel, str) or not rel or rel.startswith("/") or ".." in rel:
        report.add(f"{path}.relative_path", "session-relative path", f"bad media path {rel!r}")
    if not isinstance(media["content_hash"], str) or not _HEX64.match(media["content_hash"]):
        report.add(f"{path}.content_hash", "hex-64 digest", "content_hash must be 64 lowercase hex chars")
    if not _is_int(media["byte_len"]) or media["byte_len"] < 0:
        report.add(f"{path}.byte_len", "non-negative integer", "byte_len must be >= 0")


def _check_span(report: ValidationReport, span: Any, path: str) -> None:
    if not _require(report, span, ("start_ms", "end_ms"), path):
        return
    if not _is_int(span["start_ms"]) or not _is_int(span["end_ms"]):
        report.add(path, "integer span", "span bounds must be integers")
        return
    if span["start_ms"] < 0 or span["end_ms"] < span["start_ms"]:
        report.add(path, "ordered span", "requires 0 <= start_ms <= end_ms")


def _check_detections(report: ValidationReport, payload: Any, path: str) -> None:
    if not _require(report, payload, ("detections", "ref_frame_seq"), path):
        return
    if not _is_int(payload["ref_frame_seq"]) or payload["ref_frame_seq"] < 0:
        report.add(f"{path}.ref_frame_seq", "non-negative integer", "ref_frame_seq must be >= 0")
    dets = payload["detections"]
    if not isinstance(dets, list):
        report.add(f"{path}.detections", "array", "detections must be an array")
        return
    for i, det in enumerate(dets):
        dpath = f"{path}.detections[{i}]"
        if not _require(report, det, ("value", "confidence", "box"), dpath):
            continue
        if not isinstance(det["value"], str):
            report.add(f"{dpath}.value", "string", "detection value must be a string")
        _check_unit(report, det["confidence"], f"{dpath}.confidence")
        _check_rect(report, det["box"], f"{dpath}.box")


def validate_payload(stream: str, payload: Any, report: ValidationReport, path: str = "payload") -> None:
    if stream == StreamId.EEG_RAW.value:
        if not _require(report, payload, ("channels",), path):
            return
        channels = payload["channels"]
        if not isinstance(channels, list) or len(channels) != EEG_CHANNELS:
            report.add(f"{path}.channels", f"length {EEG_CHANNELS}", "channels must hold exactly 14 values")
            return
        for i, v in enumerate(channels):
            if not _is_num(v):
                report.add(f"{path}.channels[{i}]", "finite number", f"channel value {v!r} not finite")
    elif stream == StreamId.GSR.value:
        if not _require(report, payload, ("conductance_us",), path):
            return
        v = payload["conductance_us"]
        if not _is_num(v) or float(v) <= 0:
            report.add(f"{path}.conductance_us", "positive number", "conductance must be finite and > 0")
    elif stream == StreamId.IMAGE_FRAME.value:
        if not _require(report, payload, ("media", "width_px", "height_px", "blurred_regions"), path):
            return
        _check_media(report, payload["media"], f"{path}.media")
        for key in ("width_px", "height_px"):
            if not _is_int(payload[key]) or payload[key] <= 0:
                report.add(f"{path}.{key}", "positive integer", f"{key} must be a positive integer")
        regions = payload["blurred_regions"]
        if not isinstance(regions, list):
            report.add(f"{path}.blurred_regions", "array", "blurred_regions must be an array")
        else:
            for i, rect in enumerate(regions):
                rpath = f"{path}.blurred_regions[{i}]"
                _check_rect(report, rect, rpath)
                if (
                    isinstance(rect, dict)
                    and all(_is_int(rect.get(k)) for k in ("x", "y", "w", "h"))
                    and _is_int(payload.get("width_px"))
                    and _is_int(payload.get("height_px"))
                ):
                    if rect["x"] + rect["w"] > payload["width_px"] or rect["y"] + rect["h"] > payload["height_px"]:
                        report.add(rpath, "within frame bounds", "blurred region exceeds frame bounds")
    elif stream == StreamId.AUDIO_CHUNK.value:
        if not _require(report, payload, ("media", "duration_ms"), path):
            return
        _check_media(report, payload["media"], f"{path}.media")
        if not _is_int(payload["duration_ms"]) or payload["duration_ms"] <= 0:
            report.add(f"{path}.duration_ms", "positive integer", "duration_ms must be > 0")
    elif stream == StreamId.EEG_BANDPOWER.value:
        if not _require(report, payload, ("per_channel",), path):
            return
        entries = payload["per_channel"]
        if not isinstance(entries, list) or len(entries) != EEG_CHANNELS:
            report.add(f"{path}.per_channel", f"length {EEG_CHANNELS}", "per_channel must hold 14 entries")
            return
        for i, entry in enumerate(entries):
            epath = f"{path}.per_channel[{i}]"
            if not _require(report, entry, BAND_NAMES, epath):
                continue
            for band in BAND_NAMES:
                v = entry[band]
                if not _is_num(v) or float(v) < 0:
                    report.add(f"{epath}.{band}", "non-negative number", "band power must be finite and >= 0")
    elif stream == StreamId.FACIAL_EXPRESSION.value:
        if not _require(report, payload, ("eye_action", "upper_face", "lower_face"), path):
            return
        if payload["eye_action"] not in EYE_ACTIONS:
            report.add(f"{path}.eye_action", f"one of {EYE_ACTIONS}", f"unknown eye action {payload['eye_action']!r}")
        for part, actions in (("upper_face", UPPER_FACE_ACTIONS), ("lower_face", LOWER_FACE_ACTIONS)):
            sub = payload[part]
            if not _require(report, sub, ("action", "power"), f"{path}.{part}"):
                continue
            if sub["action"] not in actions:
                report.add(f"{path}.{part}.action", f"one of {actions}", f"unknown action {sub['action']!r}")
            _check_unit(report, sub["power"], f"{path}.{part}.power")
    elif stream == StreamId.COGNITION.value:
        if not _require(report, payload, COGNITION_KEYS, path):
            return
        for key in COGNITION_KEYS:
            _check_unit(report, payload[key], f"{path}.{key}")
    elif stream == StreamId.AUDIO_TEXT.value:
        if not _require(report, payload, ("text", "speaker", "span"), path):
            return
        if not isinstance(payload["text"], str):
            report.add(f"{path}.text", "string", "text must be a string")
        if payload["speaker"] not in SPEAKERS:
            report.add(f"{path}.speaker", f"one of {SPEAKERS}", f"unknown speaker {payload['speaker']!r}")
        _check_span(report, payload["span"], f"{path}.span")
    elif stream == StreamId.SPEECH_SENTIMENT.value:
        if not _require(report, payload, SENTIMENT_KEYS + ("ref_transcript_seq",), path):
            return
        total = 0.0
        usable = True
        for key in SENTIMENT_KEYS:
            v = payload[key]
            if not _is_num(v) or float(v) < 0:
                report.add(f"{path}.{key}", "non-negative number", "sentiment values must be >= 0")
                usable = False
            else:
                total += float(v)
        if usable and abs(total - 1.0) > SIMPLEX_TOLERANCE:
            report.add(path, "simplex sum", f"sentiment values must sum to 1 +/- {SIMPLEX_TOLERANCE}, got {total}")
        if not _is_int(payload["ref_transcript_seq"]) or payload["ref_transcript_seq"] < 0:
            report.add(f"{path}.ref_transcript_seq", "non-negative integer", "ref_transcript_seq must be >= 0")
    elif stream == StreamId.DES_REPORT.value:
        if not _require(report, payload, ("text", "span", "terminated"), path):
            return
        if not isinstance(payload["text"], str):
            report.add(f"{path}.text", "string", "text must be a string")
        if not isinstance(payload["terminated"], bool):
            report.add(f"{path}.terminated", "boolean", "terminated must be a boolean")
        _check_span(report, payload["span"], f"{path}.span")
    elif stream in (StreamId.IMAGE_TEXT.value, StreamId.IMAGE_LABELS.value):
        _check_detections(report, payload, path)
    else:
        report.add("stream", "known stream", f"unknown stream id {stream!r}")


def validate_envelope(envelope: Any, report: ValidationReport | None = None, path: str = "") -> ValidationReport:
    report = report if report is not None else ValidationReport()
    prefix = f"{path}." if path else ""
    if not _require(report, envelope, ("stream", "t_ms", "seq_in_stream", "payload"), path):
        return report
    stream = envelope["stream"]
    if stream not in {s.value for s in StreamId}:
        report.add(f"{prefix}stream", "known stream", f"unknown stream id {stream!r}")
        return report
    if not _is_int(envelope["t_ms"]) or envelope["t_ms"] < 0:
        report.add(f"{prefix}t_ms", "non-negative integer", "t_ms must be a non-negative integer")
    if not _is_int(envelope["seq_in_stream"]) or envelope["seq_in_stream"] < 0:
        report.add(f"{prefix}seq_in_stream", "non-negative integer", "seq_in_stream must be >= 0")
    validate_payload(stream, envelope["payload"], report, f"{prefix}payload")
    return report


def validate_segment(segment: Any) -> ValidationReport:
    """Validate one segment document (parsed JSON)."""
    report = ValidationReport()
    if not _require(report, segment, ("seq", "prev_attestation", "samples"), ""):
        return report
    if not _is_int(segment["seq"]) or segment["seq"] < 0:
        report.add("seq", "non-negative integer", "segment seq must be >= 0")
    prev = segment["prev_attestation"]
    if not isinstance(prev, str) or not _HEX64.match(prev):
        report.add("prev_attestation", "hex-64 digest", "prev_attestation must be 64 lowercase hex chars")
    samples = segment["samples"]
    if not isinstance(samples, list):
        report.add("samples", "array", "samples must be an array")
        return report

    last_seq: dict[str, int] = {}
    last_t: dict[str, int] = {}
    for i, envelope in enumerate(samples):
        path = f"samples[{i}]"
        validate_envelope(envelope, report, path)
        if not isinstance(envelope, dict):
            continue
        stream = envelope.get("stream")
        seq = envelope.get("seq_in_stream")
        t_ms = envelope.get("t_ms")
        if isinstance(stream, str) and _is_int(seq):
            if stream in last_seq and seq <= last_seq[stream]:
                report.add(f"{path}.seq_in_stream", "strictly increasing", f"seq {seq} repeats or regresses on {stream}")
            last_seq[stream] = seq
        if isinstance(stream, str) and _is_int(t_ms):
            if stream in last_t and t_ms < last_t[stream]:
                report.add(f"{path}.t_ms", "non-decreasing", f"t_ms {t_ms} regresses on {stream}")
            last_t[stream] = t_ms
    return report


def validate_manifest(manifest: Any) -> ValidationReport:
    """Validate one manifest document (parsed JSON)."""
    report = ValidationReport()
    required = ("session_id", "subject_id", "started_at", "schema_version", "config", "segments", "status", "duration_ms")
    if not _require(report, manifest, required, ""):
        return report
    if not isinstance(manifest["session_id"], str) or not _UUID.match(manifest["session_id"]):
        report.add("session_id", "uuid", "session_id must be a lowercase UUID")
    if not isinstance(manifest["subject_id"], str) or not manifest["subject_id"]:
        report.add("subject_id", "non-empty string", "subject_id required")
    if manifest["status"] not in ("open", "closed", "incomplete"):
        report.add("status", "known status", f"unknown status {manifest['status']!r}")
    if not _is_int(manifest["duration_ms"]) or manifest["duration_ms"] < 0:
        report.add("duration_ms", "non-negative integer", "duration_ms must be >= 0")

    for violation in validate_config(manifest["config"]):
        report.add(f"config.{violation.path}", violation.rule, violation.message)

    segments = manifest["segments"]
    if not isinstance(segments, list):
        report.add("segments", "array", "segments must be an array")
        return report
    paths: set[str] = set()
    for i, entry in enumerate(segments):
        path = f"segments[{i}]"
        if not _require(report, entry, ("seq", "file_path", "byte_len", "attested", "digest_hex"), path):
            continue
        if entry["seq"] != i:
            report.add(f"{path}.seq", "contiguous from 0", f"expected seq {i}, got {entry['seq']!r}")
        file_path = entry["file_path"]
        if not isinstance(file_path, str) or not file_path:
            report.add(f"{path}.file_path", "non-empty string", "file_path required")
        elif file_path in paths:
            report.add(f"{path}.file_path", "unique path", f"duplicate file path {file_path!r}")
        else:
            paths.add(file_path)
        if not _is_int(entry["byte_len"]) or entry["byte_len"] < 0:
            report.add(f"{path}.byte_len", "non-negative integer", "byte_len must be >= 0")
        if not isinstance(entry["attested"], bool):
            report.add(f"{path}.attested", "boolean", "attested must be a boolean")
        if not isinstance(entry["digest_hex"], str) or not _HEX64.match(entry["digest_hex"]):
            report.add(f"{path}.digest_hex", "hex-64 digest", "digest_hex must be 64 lowercase hex chars")
    return report


def validate_session_streams(
    segments: list[dict[str, Any]],
    quarantined: list[dict[str, Any]] | None = None,
) -> ValidationReport:
    """Cross-segment stream continuity for a whole session.

    Per stream, seq_in_stream must increase gap-free across the ordered
    segments and t_ms must never decrease. Seqs listed in the manifest's
    quarantine log are accounted as intentionally absent. Sentiment samples
    must reference a wearer transcript.
    """
    report = ValidationReport()
    skipped: dict[str, set[int]] = {}
    for entry in quarantined or []:
        skipped.setdefault(entry["stream"], set()).add(entry["seq"])

    next_seq: dict[str, int] = {}
    last_t: dict[str, int] = {}
    transcript_speakers: dict[int, str] = {}
    sentiments: list[tuple[str, dict[str, Any]]] = []

    for segment in segments:
        seg_seq = segment.get("seq")
        for i, envelope in enumerate(segment.get("samples", [])):
            path = f"segment[{seg_seq}].samples[{i}]"
            stream = envelope.get("stream")
            seq = envelope.get("seq_in_stream")
            t_ms = envelope.get("t_ms")
            if not isinstance(stream, str) or not _is_int(seq) or not _is_int(t_ms):
                continue
            expected = next_seq.get(stream, 0)
            while expected in skipped.get(stream, set()):
                expected += 1
            if seq != expected:
                report.add(f"{path}.seq_in_stream", "gap-free", f"expected seq {expected} on {stream}, got {seq}")
            next_seq[stream] = max(seq, expected) + 1
            if stream in last_t and t_ms < last_t[stream]:
                report.add(f"{path}.t_ms", "non-decreasing", f"t_ms {t_ms} regresses on {stream}")
            last_t[stream] = t_ms
            if stream == StreamId.AUDIO_TEXT.value and isinstance(envelope.get("payload"), dict):
                transcript_speakers[seq] = envelope["payload"].get("speaker", "")
            if stream == StreamId.SPEECH_SENTIMENT.value and isinstance(envelope.get("payload"), dict):
                sentiments.append((path, envelope["payload"]))

    for path, payload in sentiments:
        ref = payload.get("ref_transcript_seq")
        if not _is_int(ref):
            continue
        speaker = transcript_speakers.get(ref)
        if speaker is None:
            report.add(f"{path}.payload.ref_transcript_seq", "resolvable reference", f"no transcript with seq {ref}")
        elif speaker != "wearer":
            report.add(f"{path}.payload.ref_transcript_seq", "wearer transcript", "sentiment must reference wearer speech")
    return report

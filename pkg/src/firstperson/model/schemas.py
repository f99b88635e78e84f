"""Machine-readable JSON Schemas for every persisted document.

One schema per stream payload, plus envelope, segment, manifest, scenario,
consent record, and session config. Cross-field rules that JSON Schema
cannot express (the sentiment simplex sum) are carried as ``x-`` extension
keywords: standard validators treat them as annotations, and the bundled
test harness enforces them so schema verdicts match validate().
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .streams import (
    BAND_NAMES,
    COGNITION_KEYS,
    EEG_CHANNELS,
    EYE_ACTIONS,
    LOWER_FACE_ACTIONS,
    SENTIMENT_KEYS,
    SIMPLEX_TOLERANCE,
    SPEAKERS,
    UPPER_FACE_ACTIONS,
    StreamId,
)

DRAFT = "https://json-schema.org/draft/2020-12/schema"

_HEX64_SCHEMA = {"type": "string", "pattern": "^[0-9a-f]{64}$"}
_NON_NEG_INT = {"type": "integer", "minimum": 0}
_UNIT = {"type": "number", "minimum": 0.0, "maximum": 1.0}


def _obj(properties: dict[str, Any], required: list[str] | None = None, **extra: Any) -> dict[str, Any]:
    schema: dict[str, Any] = {
        "type": "object",
        "properties": properties,
        "required": sorted(required if required is not None else properties.keys()),
        "additionalProperties": False,
    }
    schema.update(extra)
    return schema


def rect_schema() -> dict[str, Any]:
    return _obj(
        {
            "x": _NON_NEG_INT,
            "y": _NON_NEG_INT,
            "w": {"type": "integer", "minimum": 1},
            "h": {"type": "integer", "minimum": 1},
        }
    )


def media_ref_schema() -> dict[str, Any]:
    return _obj(
        {
            "relative_path": {"type": "string", "minLength": 1, "pattern": "^(?!/)(?!.*\\.\\.).*$"},
            "content_hash": _HEX64_SCHEMA,
            "byte_len": _NON_NEG_INT,
        }
    )


def span_schema() -> dict[str, Any]:
    return _obj(
        {"start_ms": _NON_NEG_INT, "end_ms": _NON_NEG_INT},
        **{"x-ordered": {"fields": ["start_ms", "end_ms"]}},
    )


def _detections_schema() -> dict[str, Any]:
    return _obj(
        {
            "detections": {
                "type": "array",
                "items": _obj({"value": {"type": "string"}, "confidence": _UNIT, "box": rect_schema()}),
            },
            "ref_frame_seq": _NON_NEG_INT,
        }
    )


def payload_schema(stream: StreamId) -> dict[str, Any]:
    if stream is StreamId.EEG_RAW:
        return _obj(
            {
                "channels": {
                    "type": "array",
                    "items": {"type": "number"},
                    "minItems": EEG_CHANNELS,
                    "maxItems": EEG_CHANNELS,
                }
            }
        )
    if stream is StreamId.GSR:
        return _obj({"conductance_us": {"type": "number", "exclusiveMinimum": 0.0}})
    if stream is StreamId.IMAGE_FRAME:
        return _obj(
            {
                "media": media_ref_schema(),
                "width_px": {"type": "integer", "minimum": 1},
                "height_px": {"type": "integer", "minimum": 1},
                "blurred_regions": {"type": "array", "items": rect_schema()},
            },
            **{"x-regions-within-bounds": {"regions": "blurred_regions"}},
        )
    if stream is StreamId.AUDIO_CHUNK:
        return _obj({"media": media_ref_schema(), "duration_ms": {"type": "integer", "minimum": 1}})
    if stream is StreamId.EEG_BANDPOWER:
        band_entry = _obj({band: {"type": "number", "minimum": 0.0} for band in BAND_NAMES})
        return _obj(
            {
                "per_channel": {
                    "type": "array",
                    "items": band_entry,
                    "minItems": EEG_CHANNELS,
                    "maxItems": EEG_CHANNELS,
                }
            }
        )
    if stream is StreamId.FACIAL_EXPRESSION:
        return _obj(
            {
                "eye_action": {"enum": list(EYE_ACTIONS)},
                "upper_face": _obj({"action": {"enum": list(UPPER_FACE_ACTIONS)}, "power": _UNIT}),
                "lower_face": _obj({"action": {"enum": list(LOWER_FACE_ACTIONS)}, "power": _UNIT}),
            }
        )
    if stream is StreamId.COGNITION:
        return _obj({key: _UNIT for key in COGNITION_KEYS})
    if stream is StreamId.AUDIO_TEXT:
        return _obj({"text": {"type": "string"}, "speaker": {"enum": list(SPEAKERS)}, "span": span_schema()})
    if stream is StreamId.SPEECH_SENTIMENT:
        props: dict[str, Any] = {key: {"type": "number", "minimum": 0.0} for key in SENTIMENT_KEYS}
        props["ref_transcript_seq"] = _NON_NEG_INT
        return _obj(
            props,
            **{"x-simplex-sum": {"fields": list(SENTIMENT_KEYS), "total": 1.0, "tolerance": SIMPLEX_TOLERANCE}},
        )
    if stream is StreamId.DES_REPORT:
        return _obj({"text": {"type": "string"}, "span": span_schema(), "terminated": {"type": "boolean"}})
    if stream in (StreamId.IMAGE_TEXT, StreamId.IMAGE_LABELS):
        return _detections_schema()
    raise ValueError(f"no schema for stream {stream}")


def envelope_schema() -> dict[str, Any]:
    variants = []
    for stream in StreamId:
        variants.append(
            _obj(
                {
                    "stream": {"const": stream.value},
                    "t_ms": _NON_NEG_INT,
                    "seq_in_stream": _NON_NEG_INT,
                    "payload": payload_schema(stream),
                }
            )
        )
    return {
        "$schema": DRAFT,
        "$id": "firstperson/sample-envelope.schema.json",
        "title": "SampleEnvelope",
        "oneOf": variants,
    }


def segment_schema() -> dict[str, Any]:
    env = envelope_schema()
    return {
        "$schema": DRAFT,
        "$id": "firstperson/segment.schema.json",
        "title": "SegmentFile",
        **_obj(
            {
                "seq": _NON_NEG_INT,
                "prev_attestation": _HEX64_SCHEMA,
                "samples": {"type": "array", "items": {"oneOf": env["oneOf"]}},
            },
            **{"x-stream-ordering": {"seq": "strictly-increasing", "t_ms": "non-decreasing"}},
        ),
    }


def manifest_schema() -> dict[str, Any]:
    segment_entry = _obj(
        {
            "seq": _NON_NEG_INT,
            "file_path": {"type": "string", "minLength": 1},
            "byte_len": _NON_NEG_INT,
            "attested": {"type": "boolean"},
            "digest_hex": _HEX64_SCHEMA,
        }
    )
    issue_entry = {"type": "object"}
    return {
        "$schema": DRAFT,
        "$id": "firstperson/manifest.schema.json",
        "title": "SessionManifest",
        **_obj(
            {
                "session_id": {
                    "type": "string",
                    "pattern": "^[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}$",
                },
                "subject_id": {"type": "string", "minLength": 1},
                "started_at": {"type": "string", "minLength": 1},
                "schema_version": {"type": "string", "pattern": "^\\d+\\.\\d+\\.\\d+$"},
                "config": {"type": "object"},
                "segments": {"type": "array", "items": segment_entry},
                "status": {"enum": ["open", "closed", "incomplete"]},
                "duration_ms": _NON_NEG_INT,
                "scenario_seed": {"type": "integer"},
                "scenario_path": {"type": "string"},
                "quarantined": {"type": "array", "items": issue_entry},
                "unanalyzed": {"type": "array", "items": issue_entry},
            },
            required=[
                "session_id",
                "subject_id",
                "started_at",
                "schema_version",
                "config",
                "segments",
                "status",
                "duration_ms",
            ],
        ),
    }


def scenario_schema() -> dict[str, Any]:
    span_fields = {"at_ms": _NON_NEG_INT, "span_ms": {"type": "integer", "minimum": 1}}
    events = [
        _obj(
            {
                "kind": {"const": "utterance"},
                "at_ms": _NON_NEG_INT,
                "text": {"type": "string", "minLength": 1},
                "speaker": {"type": "string", "minLength": 1},
                "duration_ms": {"type": "integer", "minimum": 1},
            },
            required=["kind", "at_ms", "text", "speaker"],
        ),
        _obj(
            {
                "kind": {"const": "face"},
                "person_id": {"type": "string", "minLength": 1},
                "box": rect_schema(),
                **span_fields,
            }
        ),
        _obj(
            {
                "kind": {"const": "scene_text"},
                "value": {"type": "string", "minLength": 1},
                "box": rect_schema(),
                **span_fields,
            }
        ),
        _obj(
            {
                "kind": {"const": "scene_object"},
                "label": {"type": "string", "minLength": 1},
                "box": rect_schema(),
                **span_fields,
            }
        ),
        _obj({"kind": {"const": "gsr_event"}, "at_ms": _NON_NEG_INT, "amplitude_us": {"type": "number", "exclusiveMinimum": 0.0}}),
        _obj(
            {
                "kind": {"const": "eeg_tone"},
                "freq_hz": {"type": "number", "exclusiveMinimum": 0.0, "exclusiveMaximum": 64.0},
                "channels": {"type": "array", "items": {"type": "integer", "minimum": 0, "maximum": EEG_CHANNELS - 1}, "minItems": 1},
                **span_fields,
            }
        ),
        _obj(
            {
                "kind": {"const": "cognition_set"},
                "values": _obj({key: _UNIT for key in COGNITION_KEYS}),
                **span_fields,
            }
        ),
        _obj(
            {
                "kind": {"const": "expression_set"},
                "eye_action": {"enum": list(EYE_ACTIONS)},
                "upper_face": _obj({"action": {"enum": list(UPPER_FACE_ACTIONS)}, "power": _UNIT}),
                "lower_face": _obj({"action": {"enum": list(LOWER_FACE_ACTIONS)}, "power": _UNIT}),
                **span_fields,
            }
        ),
    ]
    return {
        "$schema": DRAFT,
        "$id": "firstperson/scenario.schema.json",
        "title": "ScenarioScript",
        **_obj(
            {
                "seed": {"type": "integer", "minimum": 0},
                "duration_ms": {"type": "integer", "minimum": 1},
                "events": {"type": "array", "items": {"oneOf": events}},
            },
            **{"x-events-sorted": {"by": "at_ms"}, "x-spans-within-duration": True},
        ),
    }


def consent_schema() -> dict[str, Any]:
    return {
        "$schema": DRAFT,
        "$id": "firstperson/consent-record.schema.json",
        "title": "ConsentRecord",
        **_obj(
            {
                "person_id": {"type": "string", "minLength": 1},
                "face_signature": {"type": "string", "minLength": 1},
                "scope_global": {"type": "boolean"},
                "granted_to": {"type": "array", "items": {"type": "string", "minLength": 1}},
            }
        ),
    }


def config_schema() -> dict[str, Any]:
    positive = {"type": "number", "exclusiveMinimum": 0.0}
    return {
        "$schema": DRAFT,
        "$id": "firstperson/session-config.schema.json",
        "title": "SessionConfig",
        **_obj(
            {
                "schema_version": {"type": "string", "pattern": "^\\d+\\.\\d+\\.\\d+$"},
                "subject_id": {"type": "string", "minLength": 1},
                "eeg": _obj(
                    {
                        "enabled": {"type": "boolean"},
                        "rate": positive,
                        "noise_uv": {"type": "number", "minimum": 0.0},
                    }
                ),
                "gsr": _obj(
                    {
                        "enabled": {"type": "boolean"},
                        "rate": positive,
                        "baseline_us": positive,
                        "walk_step_us": {"type": "number", "minimum": 0.0},
                    }
                ),
                "image": _obj(
                    {
                        "enabled": {"type": "boolean"},
                        "rate": positive,
                        "width_px": {"type": "integer", "minimum": 1},
                        "height_px": {"type": "integer", "minimum": 1},
                    }
                ),
                "audio": _obj({"enabled": {"type": "boolean"}, "chunk_s": positive}),
                "headset": _obj({"enabled": {"type": "boolean"}, "rate": positive}),
                "bandpower": _obj({"enabled": {"type": "boolean"}, "window_s": positive, "hop_s": positive}),
                "analysis": _obj(
                    {
                        "transcribe": {"type": "boolean"},
                        "sentiment": {"type": "boolean"},
                        "image_text": {"type": "boolean"},
                        "image_labels": {"type": "boolean"},
                    }
                ),
                "targets_kb_s": {
                    "type": "object",
                    "properties": {s.value: positive for s in StreamId},
                    "required": sorted(s.value for s in StreamId),
                    "additionalProperties": False,
                },
                "rotation": _obj({"max_bytes": {"type": "integer", "minimum": 1}, "max_duration_s": positive}),
                "des": _obj(
                    {"start_phrase": {"type": "string", "minLength": 1}, "end_phrase": {"type": "string", "minLength": 1}},
                    **{"x-distinct": {"fields": ["start_phrase", "end_phrase"], "normalize": "case-whitespace"}},
                ),
                "blur": _obj({"mode": {"enum": ["pixelate", "solid"]}, "cell_px": {"type": "integer", "minimum": 1}}),
            }
        ),
    }


def all_schemas() -> dict[str, dict[str, Any]]:
    """Every schema document, keyed by file name."""
    out: dict[str, dict[str, Any]] = {}
    for stream in StreamId:
        schema = payload_schema(stream)
        out[f"payload-{stream.value}.schema.json"] = {
            "$schema": DRAFT,
            "$id": f"firstperson/payload-{stream.value}.schema.json",
            "title": f"{stream.value} payload",
            **schema,
        }
    out["sample-envelope.schema.json"] = envelope_schema()
    out["segment.schema.json"] = segment_schema()
    out["manifest.schema.json"] = manifest_schema()
    out["scenario.schema.json"] = scenario_schema()
    out["consent-record.schema.json"] = consent_schema()
    out["session-config.schema.json"] = config_schema()
    return out


def dump_schemas(out_dir: str | Path) -> list[Path]:
    """Write every schema under ``out_dir``; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, schema in all_schemas().items():
        path = out_dir / name
        path.write_text(json.dumps(schema, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written.append(path)
    return written

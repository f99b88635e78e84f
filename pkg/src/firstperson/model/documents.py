"""Persisted document types: segments, manifests, consent records.

Disk layout per session:

    <session_id>/manifest.json
    <session_id>/scenario.json
    <session_id>/segments/segment-<seq, zero-padded 6>.json
    <session_id>/media/<hash[:2]>/<content_hash>.<ext>

A SegmentFile is the unit of attestation: its content digest covers
``{"samples": ..., "seq": ...}`` so that identically seeded recordings hash
identically, while the embedded ``prev_attestation`` is checked against the
attestation service during verification.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any

from .canonical import canonical_serialize
from .streams import SampleEnvelope

ZERO_ATTESTATION_HEX = "0" * 64

_HEX64 = re.compile(r"^[0-9a-f]{64}$")
_UUID = re.compile(r"^[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}$")


def segment_file_name(seq: int) -> str:
    return f"segment-{seq:06d}.json"


@dataclass(frozen=True)
class SegmentFile:
    """A hash-chained batch of envelopes; one JSON file on disk."""

    seq: int
    prev_attestation: str
    samples: tuple[SampleEnvelope, ...]

    def __post_init__(self) -> None:
        if self.seq < 0:
            raise ValueError("segment seq must be non-negative")
        if not _HEX64.match(self.prev_attestation):
            raise ValueError("prev_attestation must be 64 lowercase hex chars")
        object.__setattr__(self, "samples", tuple(self.samples))

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "seq": self.seq,
            "prev_attestation": self.prev_attestation,
            "samples": [s.to_jsonable() for s in self.samples],
        }

    def hash_scope_jsonable(self) -> dict[str, Any]:
        """The digest covers segment content, not the chain linkage field."""
        return {"seq": self.seq, "samples": [s.to_jsonable() for s in self.samples]}

    def canonical_bytes(self) -> bytes:
        return canonical_serialize(self.to_jsonable())

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "SegmentFile":
        return cls(
            seq=data["seq"],
            prev_attestation=data["prev_attestation"],
            samples=tuple(SampleEnvelope.from_jsonable(s) for s in data["samples"]),
        )


@dataclass(frozen=True)
class SegmentEntry:
    seq: int
    file_path: str
    byte_len: int
    attested: bool
    digest_hex: str

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "seq": self.seq,
            "file_path": self.file_path,
            "byte_len": self.byte_len,
            "attested": self.attested,
            "digest_hex": self.digest_hex,
        }

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "SegmentEntry":
        return cls(
            seq=data["seq"],
            file_path=data["file_path"],
            byte_len=data["byte_len"],
            attested=data["attested"],
            digest_hex=data["digest_hex"],
        )


SESSION_STATUSES = ("open", "closed", "incomplete")


@dataclass
class SessionManifest:
    """Session identity, config snapshot, segment sequence, bookkeeping."""

    session_id: str
    subject_id: str
    started_at: str
    schema_version: str
    config: dict[str, Any]
    segments: list[SegmentEntry] = field(default_factory=list)
    status: str = "open"
    duration_ms: int = 0
    scenario_seed: int = 0
    scenario_path: str = "scenario.json"
    quarantined: list[dict[str, Any]] = field(default_factory=list)
    unanalyzed: list[dict[str, Any]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not _UUID.match(self.session_id):
            raise ValueError(f"session_id must be a UUID, got {self.session_id!r}")
        if self.status not in SESSION_STATUSES:
            raise ValueError(f"unknown session status {self.status!r}")

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "session_id": self.session_id,
            "subject_id": self.subject_id,
            "started_at": self.started_at,
            "schema_version": self.schema_version,
            "config": self.config,
            "segments": [s.to_jsonable() for s in self.segments],
            "status": self.status,
            "duration_ms": self.duration_ms,
            "scenario_seed": self.scenario_seed,
            "scenario_path": self.scenario_path,
            "quarantined": self.quarantined,
            "unanalyzed": self.unanalyzed,
        }

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "SessionManifest":
        check_schema_version(data.get("schema_version", ""))
        return cls(
            session_id=data["session_id"],
            subject_id=data["subject_id"],
            started_at=data["started_at"],
            schema_version=data["schema_version"],
            config=data["config"],
            segments=[SegmentEntry.from_jsonable(s) for s in data["segments"]],
            status=data["status"],
            duration_ms=data["duration_ms"],
            scenario_seed=data.get("scenario_seed", 0),
            scenario_path=data.get("scenario_path", "scenario.json"),
            quarantined=list(data.get("quarantined", [])),
            unanalyzed=list(data.get("unanalyzed", [])),
        )


class SchemaVersionError(ValueError):
    """Document written by an incompatible (newer major) schema."""


def check_schema_version(version: str) -> list[str]:
    """Gate deserialization: unknown major is fatal, unknown minor is a warning."""
    from .config import SCHEMA_VERSION

    ours = SCHEMA_VERSION.split(".")
    theirs = str(version).split(".")
    if len(theirs) < 2 or not theirs[0].isdigit() or not theirs[1].isdigit():
        raise SchemaVersionError(f"malformed schema_version {version!r}")
    if theirs[0] != ours[0]:
        raise SchemaVersionError(f"incompatible schema major version {version!r} (supported {SCHEMA_VERSION})")
    if theirs[1] != ours[1]:
        return [f"schema minor version {version!r} differs from {SCHEMA_VERSION}; proceeding"]
    return []


@dataclass(frozen=True)
class ConsentRecord:
    """Who may appear unblurred: globally, or for specific recording subjects."""

    person_id: str
    face_signature: str
    scope_global: bool = False
    granted_to: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.person_id:
            raise ValueError("person_id required")
        if not self.face_signature:
            raise ValueError("face_signature required")
        object.__setattr__(self, "granted_to", tuple(self.granted_to))

    def allows(self, subject_id: str) -> bool:
        return self.scope_global or subject_id in self.granted_to

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "person_id": self.person_id,
            "face_signature": self.face_signature,
            "scope_global": self.scope_global,
            "granted_to": list(self.granted_to),
        }

    @classmethod
    def from_jsonable(cls, data: dict[str, Any]) -> "ConsentRecord":
        return cls(
            person_id=data["person_id"],
            face_signature=data["face_signature"],
            scope_global=data.get("scope_global", False),
            granted_to=tuple(data.get("granted_to", ())),
        )


class ConsentRegistry:
    """In-memory registry of consent records, keyed by unique person_id."""

    def __init__(self, records: list[ConsentRecord] | None = None) -> None:
        self._records: dict[str, ConsentRecord] = {}
        for record in records or []:
            self.add(record)

    def add(self, record: ConsentRecord, replace: bool = False) -> None:
        if record.person_id in self._records and not replace:
            raise ValueError(f"person_id {record.person_id!r} already registered")
        self._records[record.person_id] = record

    def remove(self, person_id: str) -> bool:
        return self._records.pop(person_id, None) is not None

    def get(self, person_id: str) -> ConsentRecord | None:
        return self._records.get(person_id)

    def find_by_signature(self, signature: str) -> ConsentRecord | None:
        for record in self._records.values():
            if record.face_signature == signature:
                return record
        return None

    def records(self) -> list[ConsentRecord]:
        return sorted(self._records.values(), key=lambda r: r.person_id)

    def may_record_unblurred(self, person_id: str | None, subject_id: str) -> bool:
        """Fail-closed consent check; unknown or unmatched faces are never allowed."""
        if person_id is None:
            return False
        record = self._records.get(person_id)
        return record is not None and record.allows(subject_id)

    def to_jsonable(self) -> list[dict[str, Any]]:
        return [r.to_jsonable() for r in self.records()]

    @classmethod
    def from_jsonable(cls, data: list[dict[str, Any]]) -> "ConsentRegistry":
        return cls([ConsentRecord.from_jsonable(d) for d in data])

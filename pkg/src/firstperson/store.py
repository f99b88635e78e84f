"""Segmented session store: rotation, attestation, persistence, playback.

One writer per session appends envelopes into an in-memory segment buffer;
rotation (by size or elapsed time) seals the buffer: canonical serialize,
content-hash, attest, write to disk, and stamp the returned attestation
value into the successor's chain header. Media bytes are stored
content-addressed next to the segments. Queries merge sealed segments (plus
the live buffer for open sessions) in (t_ms, stream order, seq) order.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterator

from .integrity import (
    AttestationClient,
    AttestationError,
    AttestationUnavailable,
    hash_segment_content,
)
from .model.canonical import canonical_serialize
from .model.config import validate_config
from .model.documents import (
    SegmentEntry,
    SessionManifest,
    ZERO_ATTESTATION_HEX,
    segment_file_name,
)
from .model.streams import STREAM_ORDER, SampleEnvelope, StreamId

logger = logging.getLogger(__name__)


class StoreError(RuntimeError):
    pass


class SessionNotFound(KeyError):
    pass


def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class SessionWriter:
    """Owns the open segment of one session. Single-writer; snapshot reads
    of the live buffer are allowed from other threads."""

    def __init__(
        self,
        session_dir: Path,
        manifest: SessionManifest,
        attestation: AttestationClient | None,
        scenario_jsonable: dict[str, Any] | None = None,
    ) -> None:
        self._dir = session_dir
        self._manifest = manifest
        self._attestation = attestation
        self._lock = threading.Lock()
        self._buffer: list[dict[str, Any]] = []
        self._buffer_bytes = 0
        self._segment_first_t: int | None = None
        self._prev_attestation = ZERO_ATTESTATION_HEX
        self._next_seq = 0
        self._max_bytes = int(manifest.config["rotation"]["max_bytes"])
        self._max_duration_ms = int(float(manifest.config["rotation"]["max_duration_s"]) * 1000)
        self._closed = False

        (self._dir / "segments").mkdir(parents=True, exist_ok=True)
        (self._dir / "media").mkdir(parents=True, exist_ok=True)
        if scenario_jsonable is not None:
            (self._dir / manifest.scenario_path).write_text(
                json.dumps(scenario_jsonable, indent=2, sort_keys=True), encoding="utf-8"
            )
        self._write_manifest()

    @property
    def session_id(self) -> str:
        return self._manifest.session_id

    @property
    def manifest(self) -> SessionManifest:
        return self._manifest

    @property
    def directory(self) -> Path:
        return self._dir

    def _write_manifest(self) -> None:
        path = self._dir / "manifest.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(self._manifest.to_jsonable(), indent=2, sort_keys=True), encoding="utf-8")
        tmp.replace(path)

    def write_media(self, relative_path: str, content_hash: str, data: bytes) -> None:
        digest = hashlib.sha256(data).hexdigest()
        if digest != content_hash:
            raise StoreError(f"media digest mismatch: ref says {content_hash}, bytes hash to {digest}")
        path = self._dir / relative_path
        if path.exists():
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_bytes(data)
        tmp.replace(path)

    def append(self, envelope: SampleEnvelope, media: bytes | None = None) -> None:
        if self._closed:
            raise StoreError("session is closed")
        jsonable = envelope.to_jsonable()
        size = len(canonical_serialize(jsonable))
        try:
            if media is not None:
                payload = jsonable.get("payload", {})
                ref = payload.get("media")
                if not ref:
                    raise StoreError(f"media bytes supplied for {envelope.stream.value} without a media ref")
                self.write_media(ref["relative_path"], ref["content_hash"], media)
            with self._lock:
                self._buffer.append(jsonable)
                self._buffer_bytes += size
                if self._segment_first_t is None:
                    self._segment_first_t = envelope.t_ms
                needs_rotation = self._buffer_bytes >= self._max_bytes or (
                    envelope.t_ms - self._segment_first_t >= self._max_duration_ms
                )
            if needs_rotation:
                self.rotate()
        except OSError as exc:
            self._abort(f"disk write failed: {exc}")
            raise StoreError(f"disk write failed: {exc}") from exc

    def snapshot(self) -> list[dict[str, Any]]:
        """Copy of the not-yet-sealed envelopes, for live queries."""
        with self._lock:
            return list(self._buffer)

    def record_quarantine(self, entry: dict[str, Any]) -> None:
        self._manifest.quarantined.append(entry)

    def record_unanalyzed(self, entry: dict[str, Any]) -> None:
        self._manifest.unanalyzed.append(entry)

    def rotate(self) -> SegmentEntry | None:
        """Seal the open segment; no-op when the buffer is empty."""
        with self._lock:
            if not self._buffer:
                return None
            samples = self._buffer
            self._buffer = []
            self._buffer_bytes = 0
            self._segment_first_t = None
        return self._seal(samples)

    def _seal(self, samples: list[dict[str, Any]]) -> SegmentEntry:
        seq = self._next_seq
        self._next_seq += 1
        digest = hash_segment_content(seq, samples)
        attested = False
        next_prev = ZERO_ATTESTATION_HEX
        if self._attestation is not None:
            try:
                a = self._attestation.attest(self._manifest.session_id, seq, digest)
                attested = True
                next_prev = a.hex()
            except AttestationUnavailable as exc:
                logger.warning("segment %d not attested: %s", seq, exc)
            except AttestationError:
                raise
        document = {"seq": seq, "prev_attestation": self._prev_attestation, "samples": samples}
        data = canonical_serialize(document)
        rel = f"segments/{segment_file_name(seq)}"
        path = self._dir / rel
        try:
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(data)
            tmp.replace(path)
        except OSError as exc:
            self._abort(f"segment write failed: {exc}")
            raise StoreError(f"segment write failed: {exc}") from exc
        self._prev_attestation = next_prev
        entry = SegmentEntry(
            seq=seq, file_path=rel, byte_len=len(data), attested=attested, digest_hex=digest.hex()
        )
        self._manifest.segments.append(entry)
        self._write_manifest()
        return entry

    def close(self, duration_ms: int) -> SessionManifest:
        """Rotate the final partial segment and finalize the manifest."""
        if self._closed:
            return self._manifest
        self.rotate()
        if not self._manifest.segments:
            # A session with no samples still produces one (empty) segment so
            # the chain exists and verifies.
            self._seal([])
        self._closed = True
        self._manifest.status = "closed"
        self._manifest.duration_ms = duration_ms
        self._write_manifest()
        return self._manifest

    def _abort(self, reason: str) -> None:
        self._closed = True
        self._manifest.status = "incomplete"
        try:
            self._write_manifest()
        except OSError:
            logger.error("could not record incomplete status: %s", reason)

    def abort(self, reason: str = "aborted") -> None:
        self._abort(reason)


class SessionReader:
    """Read access to one session directory."""

    def __init__(self, session_dir: Path, live_writer: SessionWriter | None = None) -> None:
        self._dir = session_dir
        self._live = live_writer
        manifest_path = session_dir / "manifest.json"
        if not manifest_path.exists():
            raise SessionNotFound(str(session_dir))
        self.manifest = SessionManifest.from_jsonable(json.loads(manifest_path.read_text(encoding="utf-8")))

    @property
    def directory(self) -> Path:
        return self._dir

    def segment_documents(self) -> Iterator[dict[str, Any]]:
        for entry in self.manifest.segments:
            path = self._dir / entry.file_path
            yield json.loads(path.read_text(encoding="utf-8"))

    def iter_sample_dicts(self) -> Iterator[dict[str, Any]]:
        for document in self.segment_documents():
            yield from document["samples"]
        if self._live is not None:
            yield from self._live.snapshot()

    def query(
        self,
        streams: list[StreamId] | None = None,
        from_ms: int | None = None,
        to_ms: int | None = None,
    ) -> list[dict[str, Any]]:
        """Envelope dicts with stream in ``streams`` and from_ms <= t < to_ms,
        merged in (t_ms, stream order, seq) order."""
        wanted = {s.value for s in streams} if streams is not None else None
        out = []
        for sample in self.iter_sample_dicts():
            if wanted is not None and sample["stream"] not in wanted:
                continue
            if from_ms is not None and sample["t_ms"] < from_ms:
                continue
            if to_ms is not None and sample["t_ms"] >= to_ms:
                continue
            out.append(sample)
        out.sort(key=lambda s: (s["t_ms"], STREAM_ORDER[StreamId(s["stream"])], s["seq_in_stream"]))
        return out

    def media_path(self, relative_path: str) -> Path:
        path = (self._dir / relative_path).resolve()
        if not str(path).startswith(str(self._dir.resolve())):
            raise StoreError(f"media path escapes the session directory: {relative_path}")
        return path

    def verify_media(self) -> "ValidationReport":
        """Check every media reference: file exists, digest and length match."""
        from .model.validation import ValidationReport

        report = ValidationReport()
        seen: set[str] = set()
        for sample in self.iter_sample_dicts():
            media = sample.get("payload", {}).get("media")
            if not media or media["content_hash"] in seen:
                continue
            seen.add(media["content_hash"])
            where = f"{sample['stream']}[{sample['seq_in_stream']}].payload.media"
            try:
                path = self.media_path(media["relative_path"])
            except StoreError as exc:
                report.add(where, "session-relative path", str(exc))
                continue
            if not path.is_file():
                report.add(where, "file exists", f"missing media file {media['relative_path']}")
                continue
            data = path.read_bytes()
            if len(data) != media["byte_len"]:
                report.add(where, "length matches", f"expected {media['byte_len']} bytes, found {len(data)}")
            if hashlib.sha256(data).hexdigest() != media["content_hash"]:
                report.add(where, "digest matches", "stored bytes do not hash to content_hash")
        return report


class SessionStore:
    """All sessions under one data directory."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._writers: dict[str, SessionWriter] = {}

    def session_dir(self, session_id: str) -> Path:
        return self.root / session_id

    def create_session(
        self,
        config: dict[str, Any],
        attestation: AttestationClient | None,
        scenario_jsonable: dict[str, Any] | None = None,
        scenario_seed: int = 0,
        session_id: str | None = None,
    ) -> SessionWriter:
        problems = validate_config(config)
        if problems:
            raise StoreError("invalid config: " + "; ".join(v.message for v in problems))
        sid = session_id or str(uuid.uuid4())
        manifest = SessionManifest(
            session_id=sid,
            subject_id=config["subject_id"],
            started_at=_utc_now_iso(),
            schema_version=config["schema_version"],
            config=config,
            scenario_seed=scenario_seed,
        )
        session_dir = self.session_dir(sid)
        if session_dir.exists():
            raise StoreError(f"session directory already exists: {session_dir}")
        writer = SessionWriter(session_dir, manifest, attestation, scenario_jsonable)
        self._writers[sid] = writer
        return writer

    def finish(self, session_id: str) -> None:
        self._writers.pop(session_id, None)

    def open(self, session_id: str) -> SessionReader:
        session_dir = self.session_dir(session_id)
        if not (session_dir / "manifest.json").exists():
            raise SessionNotFound(session_id)
        return SessionReader(session_dir, live_writer=self._writers.get(session_id))

    def list_sessions(self) -> list[SessionManifest]:
        out = []
        for manifest_path in sorted(self.root.glob("*/manifest.json")):
            try:
                out.append(SessionManifest.from_jsonable(json.loads(manifest_path.read_text(encoding="utf-8"))))
            except (ValueError, KeyError) as exc:
                logger.warning("skipping unreadable manifest %s: %s", manifest_path, exc)
        out.sort(key=lambda m: m.started_at)
        return out

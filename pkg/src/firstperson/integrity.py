"""Tamper-evidence: segment hashing, attestation service, chain verification.

At rotation time the recorder sends the segment's content digest h to the
attestation service, which draws a fresh secret nonce and returns
a = SHA-256(h || nonce). The recorder embeds a in the NEXT segment's
prev_attestation field (32 zero bytes for segment 0). Verification replays
the chain against the service's records: a modified, reordered, or missing
file cannot present both a matching h and a matching linkage value.

Nonces never leave the service; its persisted store is private state and is
kept outside session directories.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Protocol

from .model.canonical import canonical_serialize
from .model.documents import ZERO_ATTESTATION_HEX, segment_file_name

DIGEST_LEN = 32


class AttestationError(Exception):
    """Protocol violation: out-of-order seq or conflicting digest."""


class AttestationUnavailable(Exception):
    """The service cannot be reached; the segment stays unattested."""


def hash_segment_content(seq: int, samples_jsonable: list[dict[str, Any]]) -> bytes:
    """Digest over a segment's content scope ``{"samples": ..., "seq": ...}``.

    The chain linkage field is deliberately outside the digest: it carries
    service randomness, and recordings made with the same seed must hash
    identically. Linkage is checked separately during verification.
    """
    return hashlib.sha256(canonical_serialize({"samples": samples_jsonable, "seq": seq})).digest()


def hash_segment(segment_jsonable: dict[str, Any]) -> bytes:
    return hash_segment_content(segment_jsonable["seq"], segment_jsonable["samples"])


def attestation_value(h: bytes, nonce: bytes) -> bytes:
    if len(h) != DIGEST_LEN or len(nonce) != DIGEST_LEN:
        raise ValueError("attestation inputs must be 32 bytes each")
    return hashlib.sha256(h + nonce).digest()


@dataclass(frozen=True)
class AttestationRecord:
    seq: int
    h_hex: str
    a_hex: str


class AttestationClient(Protocol):
    """What the recorder and verifier need from the attestation service."""

    def attest(self, session_id: str, seq: int, h: bytes) -> bytes:
        """Register digest ``h`` for ``seq``; returns the 32-byte a value."""
        ...

    def records(self, session_id: str) -> dict[int, AttestationRecord]:
        """All attestation records for a session (no nonces)."""
        ...


class AttestationService:
    """Reference service: nonce custody, idempotent attest, record queries.

    Backs both the in-process client used by tests/CLI and the standalone
    HTTP service. State persists as one JSON file per session under
    ``store_dir`` (private: contains nonces).
    """

    def __init__(self, store_dir: str | Path) -> None:
        self._dir = Path(store_dir)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, session_id: str) -> Path:
        safe = session_id.replace("/", "_")
        return self._dir / f"{safe}.json"

    def _load(self, session_id: str) -> list[dict[str, Any]]:
        path = self._path(session_id)
        if not path.exists():
            return []
        return json.loads(path.read_text(encoding="utf-8"))

    def _save(self, session_id: str, entries: list[dict[str, Any]]) -> None:
        tmp = self._path(session_id).with_suffix(".tmp")
        tmp.write_text(json.dumps(entries, indent=None, sort_keys=True), encoding="utf-8")
        tmp.replace(self._path(session_id))

    def attest(self, session_id: str, seq: int, h: bytes) -> bytes:
        if len(h) != DIGEST_LEN:
            raise AttestationError("digest must be 32 bytes")
        if seq < 0:
            raise AttestationError("seq must be non-negative")
        with self._lock:
            entries = self._load(session_id)
            for entry in entries:
                if entry["seq"] == seq:
                    if entry["h_hex"] == h.hex():
                        # Idempotent retry: same digest gets the same answer.
                        return bytes.fromhex(entry["a_hex"])
                    raise AttestationError(f"conflicting digest for seq {seq}")
            if entries and seq <= max(e["seq"] for e in entries):
                raise AttestationError(f"seq {seq} is not after {max(e['seq'] for e in entries)}")
            nonce = secrets.token_bytes(DIGEST_LEN)
            a = attestation_value(h, nonce)
            entries.append(
                {
                    "seq": seq,
                    "h_hex": h.hex(),
                    "nonce_hex": nonce.hex(),
                    "a_hex": a.hex(),
                    "issued_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                }
            )
            self._save(session_id, entries)
            return a

    def verify_one(self, session_id: str, seq: int, h_hex: str, next_prev_hex: str) -> bool:
        """Does ``h`` match our record and does ``next_prev`` equal our a?"""
        with self._lock:
            for entry in self._load(session_id):
                if entry["seq"] == seq:
                    if entry["h_hex"] != h_hex:
                        return False
                    recomputed = attestation_value(bytes.fromhex(h_hex), bytes.fromhex(entry["nonce_hex"]))
                    return recomputed.hex() == next_prev_hex
            return False

    def records(self, session_id: str) -> dict[int, AttestationRecord]:
        with self._lock:
            out: dict[int, AttestationRecord] = {}
            for entry in self._load(session_id):
                # Recompute a from the stored nonce rather than trusting the
                # cached value; a corrupted store must not verify.
                a = attestation_value(bytes.fromhex(entry["h_hex"]), bytes.fromhex(entry["nonce_hex"]))
                out[entry["seq"]] = AttestationRecord(seq=entry["seq"], h_hex=entry["h_hex"], a_hex=a.hex())
            return out

    def sessions(self) -> list[str]:
        return sorted(p.stem for p in self._dir.glob("*.json"))


class HttpAttestationClient:
    """Client for the standalone attestation service (see service.attest)."""

    def __init__(self, base_url: str, timeout: float = 10.0) -> None:
        import httpx

        self._base = base_url.rstrip("/")
        self._client = httpx.Client(base_url=self._base, timeout=timeout)

    def attest(self, session_id: str, seq: int, h: bytes) -> bytes:
        import httpx

        try:
            response = self._client.post(
                "/attest", json={"session_id": session_id, "seq": seq, "h_hex": h.hex()}
            )
        except httpx.HTTPError as exc:
            raise AttestationUnavailable(str(exc)) from exc
        if response.status_code == 409:
            raise AttestationError(response.json().get("detail", "attestation conflict"))
        if response.status_code != 200:
            raise AttestationUnavailable(f"attest returned {response.status_code}")
        return bytes.fromhex(response.json()["a_hex"])

    def records(self, session_id: str) -> dict[int, AttestationRecord]:
        import httpx

        try:
            response = self._client.get(f"/sessions/{session_id}/attestations")
        except httpx.HTTPError as exc:
            raise AttestationUnavailable(str(exc)) from exc
        if response.status_code != 200:
            raise AttestationUnavailable(f"attestations returned {response.status_code}")
        return {
            entry["seq"]: AttestationRecord(seq=entry["seq"], h_hex=entry["h_hex"], a_hex=entry["a_hex"])
            for entry in response.json()["records"]
        }

    def close(self) -> None:
        self._client.close()


class FlakyAttestationClient:
    """Test helper: simulates the service being down for selected seqs."""

    def __init__(self, inner: AttestationClient, down_seqs: Iterable[int] = ()) -> None:
        self._inner = inner
        self._down = set(down_seqs)

    def attest(self, session_id: str, seq: int, h: bytes) -> bytes:
        if seq in self._down:
            raise AttestationUnavailable(f"service unreachable for seq {seq}")
        return self._inner.attest(session_id, seq, h)

    def records(self, session_id: str) -> dict[int, AttestationRecord]:
        return self._inner.records(session_id)


@dataclass(frozen=True)
class ChainVerdict:
    """Valid, TamperedAt(seq), or GapAt(seq)."""

    kind: str  # "valid" | "tampered" | "gap"
    seq: int | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.kind == "valid"

    def __str__(self) -> str:
        if self.kind == "valid":
            return "Valid"
        name = "TamperedAt" if self.kind == "tampered" else "GapAt"
        return f"{name}({self.seq})"

    def to_jsonable(self) -> dict[str, Any]:
        return {"kind": self.kind, "seq": self.seq, "detail": self.detail, "verdict": str(self)}


def verify_chain(session_dir: str | Path, client: AttestationClient, session_id: str | None = None) -> ChainVerdict:
    """Walk a session's segment files against the service's records.

    Checks, per seq: the file exists and parses; its content digest matches
    the service record; its embedded prev_attestation equals the service's
    a for the previous seq (zero sentinel for seq 0). Unattested segments
    (service unreachable at record time) yield a gap, not a tamper verdict.
    The first failure wins.
    """
    session_dir = Path(session_dir)
    manifest_path = session_dir / "manifest.json"
    if not manifest_path.exists():
        return ChainVerdict("gap", None, "manifest.json missing")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        return ChainVerdict("tampered", None, f"manifest unreadable: {exc}")

    sid = session_id or manifest.get("session_id", "")
    records = client.records(sid)

    manifest_seqs = [entry.get("seq", -1) for entry in manifest.get("segments", [])]
    top = -1
    if manifest_seqs:
        top = max(top, max(manifest_seqs))
    if records:
        # The service's view bounds the walk too, so deleting trailing
        # segments together with their manifest entries is still a gap.
        top = max(top, max(records))

    expected_prev = ZERO_ATTESTATION_HEX
    for seq in range(top + 1):
        path = session_dir / "segments" / segment_file_name(seq)
        if not path.exists():
            return ChainVerdict("gap", seq, f"segment file missing: {path.name}")
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            return ChainVerdict("tampered", seq, f"segment unreadable: {exc}")
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            return ChainVerdict("tampered", seq, f"segment is not valid JSON: {exc}")
        if not isinstance(document, dict) or document.get("seq") != seq:
            return ChainVerdict("tampered", seq, f"segment declares seq {document.get('seq')!r}, expected {seq}")
        prev = document.get("prev_attestation")
        if prev != expected_prev:
            return ChainVerdict("tampered", seq, "prev_attestation does not match the chain")
        try:
            h = hash_segment(document)
        except Exception as exc:
            return ChainVerdict("tampered", seq, f"segment not canonically hashable: {exc}")
        record = records.get(seq)
        if record is None:
            return ChainVerdict("gap", seq, "segment was never attested")
        if record.h_hex != h.hex():
            return ChainVerdict("tampered", seq, "content digest differs from attested digest")
        expected_prev = record.a_hex
    return ChainVerdict("valid")


def scan_for_nonces(paths: Iterable[Path], service: AttestationService, session_id: str) -> list[str]:
    """Return any nonce hex strings found in client-visible files (test aid)."""
    nonces = [
        entry["nonce_hex"]
        for entry in service._load(session_id)  # noqa: SLF001 - deliberate, test-only introspection
    ]
    hits = []
    for path in paths:
        try:
            blob = path.read_bytes()
        except OSError:
            continue
        for nonce in nonces:
            if nonce.encode("ascii") in blob:
                hits.append(f"{path}: {nonce}")
    return hits

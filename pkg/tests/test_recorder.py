"""End-to-end recording: enrichment wiring, privacy, determinism, bookkeeping."""

from __future__ import annotations

import json
import random

import pytest

from firstperson.enrich.clients import MockFaceDetectClient, MockTranscribeClient
from firstperson.integrity import AttestationService
from firstperson.model.documents import ConsentRecord, ConsentRegistry
from firstperson.model.streams import STREAM_ORDER, StreamId
from firstperson.model.validation import validate_segment, validate_session_streams
from firstperson.recorder import record_session
from firstperson.sim.base import SIDECAR_MARKER
from firstperson.sim.scenario import make_demo_scenario
from firstperson.store import SessionStore
from conftest import scenario_from_events, small_config


def make_store(tmp_path):
    return SessionStore(tmp_path / "sessions"), AttestationService(tmp_path / "attest")


def face_scenario(duration_ms=6000, person="alice", seed=0):
    return scenario_from_events(
        [
            {"at_ms": 0, "kind": "face", "person_id": person,
             "box": {"x": 40, "y": 40, "w": 96, "h": 96}, "span_ms": duration_ms},
            {"at_ms": 1000, "kind": "utterance", "speaker": "wearer",
             "text": "start ziggy I love this lovely demo end ziggy"},
            {"at_ms": 2000, "kind": "utterance", "speaker": "guest", "text": "terrible weather"},
            {"at_ms": 2500, "kind": "scene_text", "value": "EXIT",
             "box": {"x": 200, "y": 30, "w": 80, "h": 30}, "span_ms": 2000},
            {"at_ms": 3000, "kind": "scene_object", "label": "burger",
             "box": {"x": 180, "y": 120, "w": 90, "h": 70}, "span_ms": 2000},
        ],
        duration_ms=duration_ms,
        seed=seed,
    )


class TestDerivedStreams:
    @pytest.fixture()
    def recorded(self, tmp_path):
        store, service = make_store(tmp_path)
        result = record_session(store, small_config(), face_scenario(), service)
        return store, store.open(result.session_id), result

    def test_all_twelve_streams_present(self, recorded):
        _, reader, _ = recorded
        streams = {s["stream"] for s in reader.query()}
        assert streams == {s.value for s in StreamId}

    def test_derived_causality(self, recorded):
        _, reader, _ = recorded
        samples = reader.query()
        frames = {s["seq_in_stream"]: s["t_ms"] for s in samples if s["stream"] == "image-frame"}
        chunks = {s["seq_in_stream"]: s["t_ms"] for s in samples if s["stream"] == "audio-chunk"}
        transcripts = {}
        for sample in samples:
            if sample["stream"] == "image-text" or sample["stream"] == "image-labels":
                assert sample["t_ms"] >= frames[sample["payload"]["ref_frame_seq"]]
            if sample["stream"] == "audio-text":
                transcripts[sample["seq_in_stream"]] = sample
                assert any(sample["t_ms"] >= t for t in chunks.values())
            if sample["stream"] == "speech-sentiment":
                ref = transcripts[sample["payload"]["ref_transcript_seq"]]
                assert sample["t_ms"] >= ref["t_ms"]

    def test_transcripts_and_sentiment(self, recorded):
        _, reader, _ = recorded
        transcripts = reader.query([StreamId.AUDIO_TEXT])
        speakers = [t["payload"]["speaker"] for t in transcripts]
        assert speakers.count("wearer") == 1
        assert speakers.count("other") == 1
        sentiments = reader.query([StreamId.SPEECH_SENTIMENT])
        assert len(sentiments) == 1  # wearer speech only
        scores = sentiments[0]["payload"]
        assert max(("positive", "negative", "mixed", "neutral"), key=scores.get) == "positive"

    def test_des_report_extracted(self, recorded):
        _, reader, _ = recorded
        reports = reader.query([StreamId.DES_REPORT])
        assert len(reports) == 1
        assert reports[0]["payload"]["text"] == "I love this lovely demo"
        assert reports[0]["payload"]["terminated"] is True

    def test_image_analysis_streams_reference_frames(self, recorded):
        _, reader, _ = recorded
        texts = reader.query([StreamId.IMAGE_TEXT])
        labels = reader.query([StreamId.IMAGE_LABELS])
        frame_count = len(reader.query([StreamId.IMAGE_FRAME]))
        assert len(texts) == frame_count
        assert len(labels) == frame_count
        exit_hits = [d for t in texts for d in t["payload"]["detections"] if d["value"] == "EXIT"]
        burger_hits = [d for l in labels for d in l["payload"]["detections"] if d["value"] == "burger"]
        assert len(exit_hits) == 2  # 2 s span at 1 fps
        assert len(burger_hits) == 2

    def test_faces_blurred_without_consent(self, recorded):
        _, reader, _ = recorded
        frames = reader.query([StreamId.IMAGE_FRAME])
        assert frames
        for frame in frames:
            assert frame["payload"]["blurred_regions"] == [{"x": 40, "y": 40, "w": 96, "h": 96}]

    def test_consented_face_not_blurred(self, tmp_path):
        store, service = make_store(tmp_path)
        registry = ConsentRegistry([ConsentRecord("alice", "sig:alice", scope_global=True)])
        result = record_session(store, small_config(), face_scenario(), service, registry=registry)
        reader = store.open(result.session_id)
        for frame in reader.query([StreamId.IMAGE_FRAME]):
            assert frame["payload"]["blurred_regions"] == []


class TestPrivacyPlumbing:
    def test_sidecar_marker_never_persisted(self, tmp_path):
        store, service = make_store(tmp_path)
        result = record_session(store, small_config(), face_scenario(), service)
        session_dir = store.session_dir(result.session_id)
        marker = SIDECAR_MARKER.encode()
        for path in session_dir.rglob("*"):
            if path.is_file() and path.suffix == ".json":
                assert marker not in path.read_bytes(), path

    def test_detector_failure_quarantines_and_documents_gap(self, tmp_path):
        store, service = make_store(tmp_path)
        registry = ConsentRegistry()
        face_client = MockFaceDetectClient(registry, fail_on_calls={2})
        result = record_session(
            store, small_config(), face_scenario(), service, registry=registry, face_client=face_client
        )
        reader = store.open(result.session_id)
        frames = reader.query([StreamId.IMAGE_FRAME])
        assert len(frames) == 5  # one of six quarantined
        assert [f["seq_in_stream"] for f in frames] == [0, 1, 3, 4, 5]
        quarantined = reader.manifest.quarantined
        assert quarantined == [{"stream": "image-frame", "seq": 2, "reason": quarantined[0]["reason"]}]
        report = validate_session_streams(list(reader.segment_documents()), quarantined)
        assert report.ok, report.to_jsonable()

    def test_transcribe_failure_marks_unanalyzed_and_continues(self, tmp_path):
        store, service = make_store(tmp_path)
        client = MockTranscribeClient(fail_on_calls={0})
        scenario = face_scenario(duration_ms=25_000)
        result = record_session(store, small_config(), scenario, service, transcribe_client=client)
        reader = store.open(result.session_id)
        assert reader.manifest.unanalyzed == [
            {"stream": "audio-chunk", "seq": 0, "kind": "transcribe", "reason": reader.manifest.unanalyzed[0]["reason"]}
        ]
        # Chunks after the failed one still transcribe; session remains valid.
        assert len(reader.query([StreamId.AUDIO_CHUNK])) == 3


class TestDeterminism:
    def test_same_seed_same_segment_digests_and_stream_bytes(self, tmp_path):
        config = small_config()
        scenario = make_demo_scenario(seed=21, duration_ms=10_000)

        def run(name):
            store = SessionStore(tmp_path / name / "sessions")
            service = AttestationService(tmp_path / name / "attest")
            result = record_session(store, config, scenario, service)
            reader = store.open(result.session_id)
            digests = [entry.digest_hex for entry in reader.manifest.segments]
            samples = [json.dumps(s, sort_keys=True) for s in reader.query()]
            return digests, samples

        digests_a, samples_a = run("a")
        digests_b, samples_b = run("b")
        assert digests_a == digests_b
        assert samples_a == samples_b

    def test_segments_validate(self, tmp_path):
        store, service = make_store(tmp_path)
        result = record_session(store, small_config(), make_demo_scenario(seed=2, duration_ms=8000), service)
        reader = store.open(result.session_id)
        for document in reader.segment_documents():
            assert validate_segment(document).ok

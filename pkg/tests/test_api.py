"""Control service: lifecycle, playback, consent, verification, live WS."""

from __future__ import annotations

import json
import time

import pytest
from fastapi.testclient import TestClient

from firstperson.model.streams import StreamId
from firstperson.service.control import create_control_app
from firstperson.service.live import LiveHub
from conftest import scenario_from_events, small_config


@pytest.fixture()
def client(tmp_path):
    app = create_control_app(tmp_path / "data")
    with TestClient(app) as test_client:
        yield test_client


def start_and_wait(client: TestClient, body: dict, timeout_s: float = 30.0) -> str:
    response = client.post("/sessions", json=body)
    assert response.status_code == 201, response.text
    session_id = response.json()["session_id"]
    deadline = time.time() + timeout_s
    while time.time() < deadline:
        summary = client.get(f"/sessions/{session_id}").json()
        if summary["status"] == "closed":
            return session_id
        time.sleep(0.05)
    raise AssertionError("session did not close in time")


def light_body(duration_ms: int = 10_000, **config_overrides) -> dict:
    config = small_config()
    config["eeg"]["enabled"] = False
    config["image"]["enabled"] = False
    for key, value in config_overrides.items():
        config[key] = value
    return {"config": config, "scenario": {"seed": 0, "duration_ms": duration_ms, "events": []}}


class TestLifecycle:
    def test_record_close_verify_valid(self, client):
        session_id = start_and_wait(client, light_body())
        verdict = client.get(f"/sessions/{session_id}/verify").json()
        assert verdict["verdict"] == "Valid"

    def test_listing_includes_session(self, client):
        session_id = start_and_wait(client, light_body())
        sessions = client.get("/sessions").json()
        assert [s["session_id"] for s in sessions] == [session_id]
        assert sessions[0]["status"] == "closed"
        assert sessions[0]["segment_count"] >= 1

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404
        assert client.get("/sessions/nope/verify").status_code == 404
        assert client.post("/sessions/nope/stop").status_code == 404

    def test_stop_closed_session_409(self, client):
        session_id = start_and_wait(client, light_body())
        response = client.post(f"/sessions/{session_id}/stop")
        assert response.status_code == 409

    def test_stop_running_realtime_session(self, client):
        body = light_body(duration_ms=60_000)
        body["realtime"] = True
        response = client.post("/sessions", json=body)
        session_id = response.json()["session_id"]
        time.sleep(0.8)
        stop = client.post(f"/sessions/{session_id}/stop")
        assert stop.status_code == 200
        assert stop.json()["status"] == "closed"
        again = client.post(f"/sessions/{session_id}/stop")
        assert again.status_code == 409
        summary = client.get(f"/sessions/{session_id}").json()
        assert summary["status"] == "closed"
        assert summary["duration_ms"] < 60_000

    def test_invalid_config_422_with_path(self, client):
        body = light_body()
        body["config"]["image"] = dict(body["config"]["image"], rate=-1, enabled=True)
        response = client.post("/sessions", json=body)
        assert response.status_code == 422
        paths = [v["path"] for v in response.json()["detail"]]
        assert "image.rate" in paths

    def test_invalid_scenario_422(self, client):
        body = light_body()
        body["scenario"]["events"] = [{"at_ms": 0, "kind": "eeg_tone", "freq_hz": 70.0, "channels": [0], "span_ms": 100}]
        response = client.post("/sessions", json=body)
        assert response.status_code == 422


class TestPlayback:
    def test_samples_filter_and_pagination(self, client):
        session_id = start_and_wait(client, light_body())
        page = client.get(
            f"/sessions/{session_id}/samples",
            params={"streams": "cognition", "from_ms": 0, "to_ms": 10_000, "limit": 7},
        ).json()
        assert len(page["samples"]) == 7
        assert page["next_cursor"]
        rest = client.get(
            f"/sessions/{session_id}/samples",
            params={"streams": "cognition", "cursor": page["next_cursor"]},
        ).json()
        assert len(rest["samples"]) == 20 - 7
        assert rest["next_cursor"] is None
        all_t = [s["t_ms"] for s in page["samples"] + rest["samples"]]
        assert all_t == sorted(all_t)

    def test_unknown_stream_404(self, client):
        session_id = start_and_wait(client, light_body())
        response = client.get(f"/sessions/{session_id}/samples", params={"streams": "telepathy"})
        assert response.status_code == 404

    def test_rate_report_endpoint(self, client):
        from firstperson.rates import daily_gb

        body = light_body()
        session_id = start_and_wait(client, body)
        report = client.get(f"/sessions/{session_id}/rate-report").json()
        expected = daily_gb("full", body["config"]["targets_kb_s"])
        assert report["extrapolated_full_day_gb"] == pytest.approx(expected)
        assert report["duration_ms"] == 10_000

    def test_projections_endpoint(self, client):
        projection = client.get("/projections", params={"target_gb": 40, "mode": "full"}).json()
        assert projection["days"] == pytest.approx(1.0458, rel=1e-3)
        assert client.get("/projections", params={"target_gb": -1, "mode": "full"}).status_code == 422
        assert client.get("/projections", params={"target_gb": 1, "mode": "noisy"}).status_code == 422

    def test_media_roundtrip_and_traversal_guard(self, client, tmp_path):
        body = light_body()
        body["config"]["image"] = small_config()["image"] | {"enabled": True}
        session_id = start_and_wait(client, body)
        samples = client.get(f"/sessions/{session_id}/samples", params={"streams": "image-frame", "limit": 1}).json()
        media = samples["samples"][0]["payload"]["media"]
        sub = media["relative_path"].removeprefix("media/")
        data = client.get(f"/sessions/{session_id}/media/{sub}")
        assert data.status_code == 200
        assert data.headers["content-type"] == "image/jpeg"
        import hashlib

        assert hashlib.sha256(data.content).hexdigest() == media["content_hash"]
        evil = client.get(f"/sessions/{session_id}/media/../manifest.json")
        assert evil.status_code in (400, 404, 500) or "session_id" not in evil.text


class TestConfigAndConsent:
    def test_config_round_trip(self, client):
        config = client.get("/config").json()
        assert config["image"]["rate"] == 1.0
        config["image"]["rate"] = 2.0
        put = client.put("/config", json={"image": {"rate": 2.0}})
        assert put.status_code == 200
        assert client.get("/config").json()["image"]["rate"] == 2.0

    def test_put_invalid_config_422(self, client):
        response = client.put("/config", json={"image": {"rate": -3}})
        assert response.status_code == 422
        assert any(v["path"] == "image.rate" for v in response.json()["detail"])

    def test_consent_crud(self, client):
        record = {"person_id": "alice", "face_signature": "sig:alice", "scope_global": True, "granted_to": []}
        assert client.post("/consent", json=record).status_code == 201
        assert client.post("/consent", json=record).status_code == 409
        listing = client.get("/consent").json()
        assert [r["person_id"] for r in listing] == ["alice"]
        assert client.delete("/consent/alice").status_code == 204
        assert client.delete("/consent/alice").status_code == 404
        assert client.get("/consent").json() == []

    def test_consent_gates_blur_across_sessions(self, client):
        face_events = [
            {"at_ms": 0, "kind": "face", "person_id": "alice", "box": {"x": 30, "y": 30, "w": 64, "h": 64}, "span_ms": 3000}
        ]
        body = {
            "config": small_config(),
            "scenario": {"seed": 1, "duration_ms": 3000, "events": face_events},
        }
        first = start_and_wait(client, body)
        frames = client.get(f"/sessions/{first}/samples", params={"streams": "image-frame"}).json()["samples"]
        assert all(f["payload"]["blurred_regions"] for f in frames)

        client.post(
            "/consent",
            json={"person_id": "alice", "face_signature": "sig:alice", "scope_global": True, "granted_to": []},
        )
        second = start_and_wait(client, body)
        frames = client.get(f"/sessions/{second}/samples", params={"streams": "image-frame"}).json()["samples"]
        assert all(f["payload"]["blurred_regions"] == [] for f in frames)


class TestSchemasEndpoint:
    def test_schema_listing_and_fetch(self, client):
        names = client.get("/schemas").json()["schemas"]
        assert "segment.schema.json" in names
        schema = client.get("/schemas/segment.schema.json").json()
        assert schema["title"] == "SegmentFile"
        assert client.get("/schemas/absent.json").status_code == 404


class TestLiveWebSocket:
    def test_live_cognition_values_in_span(self, client):
        events = [
            {
                "at_ms": 0,
                "kind": "cognition_set",
                "span_ms": 3000,
                "values": {"engagement": 0.5, "excitement": 0.5, "stress": 0.9, "relaxation": 0.5, "interest": 0.5, "focus": 0.5},
            }
        ]
        config = small_config()
        config["eeg"]["enabled"] = False
        config["image"]["enabled"] = False
        config["audio"]["enabled"] = False
        body = {
            "config": config,
            "scenario": {"seed": 0, "duration_ms": 3000, "events": events},
            "realtime": True,
        }
        response = client.post("/sessions", json=body)
        session_id = response.json()["session_id"]
        got = []
        with client.websocket_connect(f"/live/{session_id}?streams=cognition") as websocket:
            while True:
                message = websocket.receive_json()
                if message["type"] == "closed":
                    break
                if message["type"] == "sample":
                    got.append(message["envelope"])
        assert got, "no live samples delivered"
        assert all(e["stream"] == "cognition" for e in got)
        assert any(e["payload"]["stress"] == 0.9 for e in got)

    def test_backpressure_drops_preview_not_storage(self, client):
        config = small_config()
        config["image"]["enabled"] = False
        config["audio"]["enabled"] = False
        body = {"config": config, "scenario": {"seed": 0, "duration_ms": 8000, "events": []}, "realtime": True}
        session_id = client.post("/sessions", json=body).json()["session_id"]
        dropped = 0
        with client.websocket_connect(f"/live/{session_id}?streams=eeg-raw&capacity=4") as websocket:
            # Stall, then drain: the tiny queue must have dropped samples.
            time.sleep(2.5)
            while True:
                message = websocket.receive_json()
                if message["type"] == "drops":
                    dropped = max(dropped, message["count"])
                    if dropped > 0:
                        break
                if message["type"] == "closed":
                    dropped = max(dropped, message["dropped"])
                    break
        assert dropped > 0
        # Persistence saw every sample despite preview drops.
        deadline = time.time() + 20
        while time.time() < deadline:
            if client.get(f"/sessions/{session_id}").json()["status"] == "closed":
                break
            time.sleep(0.1)
        samples = client.get(
            f"/sessions/{session_id}/samples", params={"streams": "eeg-raw", "limit": 10000}
        ).json()["samples"]
        assert len(samples) == 8 * 128

    def test_unknown_session_ws_rejected(self, client):
        with pytest.raises(Exception):
            with client.websocket_connect("/live/00000000-0000-0000-0000-000000000000"):
                pass

    def test_live_frames_arrive_post_blur(self, client):
        events = [
            {"at_ms": 0, "kind": "face", "person_id": "nobody",
             "box": {"x": 20, "y": 20, "w": 64, "h": 64}, "span_ms": 2000}
        ]
        config = small_config()
        config["eeg"]["enabled"] = False
        config["audio"]["enabled"] = False
        body = {"config": config, "scenario": {"seed": 0, "duration_ms": 2000, "events": events}, "realtime": True}
        session_id = client.post("/sessions", json=body).json()["session_id"]
        frames = []
        with client.websocket_connect(f"/live/{session_id}?streams=image-frame") as websocket:
            while True:
                message = websocket.receive_json()
                if message["type"] == "closed":
                    break
                if message["type"] == "sample":
                    frames.append(message["envelope"])
        assert frames
        for frame in frames:
            assert frame["payload"]["blurred_regions"] == [{"x": 20, "y": 20, "w": 64, "h": 64}]


class TestAuth:
    def test_bearer_token_enforced(self, tmp_path):
        app = create_control_app(tmp_path / "data", token="sekrit")
        with TestClient(app) as client:
            assert client.get("/sessions").status_code == 401
            ok = client.get("/sessions", headers={"Authorization": "Bearer sekrit"})
            assert ok.status_code == 200
            assert client.get("/health").status_code == 200


class TestLiveHubUnit:
    def test_drop_oldest_counts(self):
        from firstperson.model.streams import CognitionPayload, SampleEnvelope

        hub = LiveHub()
        sub = hub.subscribe("s", None, capacity=3)
        payload = CognitionPayload(engagement=0.5, excitement=0.5, stress=0.5, relaxation=0.5, interest=0.5, focus=0.5)
        for i in range(10):
            hub.publish("s", SampleEnvelope(stream=StreamId.COGNITION, t_ms=i, seq_in_stream=i, payload=payload))
        assert sub.dropped == 7
        batch = sub.poll()
        assert [e["t_ms"] for e in batch] == [7, 8, 9]

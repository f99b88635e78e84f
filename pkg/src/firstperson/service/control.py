"""Control service: session lifecycle, playback, consent, verification, live WS.

The sole backend for the web UI and remote CLI use. Wraps the core package;
every response is derived from the session store or the attestation
service, and frames cross this boundary only after redaction (the store
never holds raw frames in the first place).
"""

from __future__ import annotations

import asyncio
import json
import logging
import threading
from pathlib import Path
from typing import Any, Optional

from fastapi import Depends, FastAPI, HTTPException, Query, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, JSONResponse

from ..integrity import AttestationClient, AttestationService, HttpAttestationClient, verify_chain
from ..model.config import default_config, merge_config, validate_config
from ..model.documents import ConsentRecord, ConsentRegistry, SessionManifest
from ..model.schemas import all_schemas
from ..model.streams import STREAM_ORDER, StreamId
from ..rates import project_recording_days, rate_report
from ..recorder import RecorderSession
from ..sim.base import ConfigurationError
from ..sim.runner import build_drivers
from ..sim.scenario import ScenarioError, make_demo_scenario, parse_scenario
from ..store import SessionNotFound, SessionStore
from .live import DEFAULT_CAPACITY, LiveHub
from .models import (
    ConsentRecordModel,
    ProjectionResponse,
    SamplesPage,
    SegmentSummary,
    SessionSummary,
    StartSessionRequest,
    StartSessionResponse,
    StopResponse,
    VerifyResponse,
)

logger = logging.getLogger(__name__)

MEDIA_TYPES = {".jpg": "image/jpeg", ".bin": "application/octet-stream"}


class ControlState:
    def __init__(
        self,
        data_dir: Path,
        attestation: AttestationClient,
        token: str | None = None,
    ) -> None:
        self.data_dir = data_dir
        self.store = SessionStore(data_dir / "sessions")
        self.attestation = attestation
        self.token = token
        self.hub = LiveHub()
        self.active: dict[str, tuple[RecorderSession, threading.Thread]] = {}
        self.lock = threading.Lock()
        self.consent_path = data_dir / "consent.json"
        self.registry = self._load_registry()
        self.config_path = data_dir / "config.json"
        self.defaults = self._load_defaults()

    def _load_registry(self) -> ConsentRegistry:
        if self.consent_path.exists():
            return ConsentRegistry.from_jsonable(json.loads(self.consent_path.read_text(encoding="utf-8")))
        return ConsentRegistry()

    def save_registry(self) -> None:
        self.consent_path.write_text(
            json.dumps(self.registry.to_jsonable(), indent=2, sort_keys=True), encoding="utf-8"
        )

    def _load_defaults(self) -> dict[str, Any]:
        if self.config_path.exists():
            return merge_config(json.loads(self.config_path.read_text(encoding="utf-8")))
        return default_config()

    def save_defaults(self) -> None:
        self.config_path.write_text(json.dumps(self.defaults, indent=2, sort_keys=True), encoding="utf-8")

    def reap(self) -> None:
        with self.lock:
            done = [sid for sid, (_, thread) in self.active.items() if not thread.is_alive()]
            for sid in done:
                self.active.pop(sid)
                self.hub.close_session(sid)


def _summary(manifest: SessionManifest) -> SessionSummary:
    return SessionSummary(
        session_id=manifest.session_id,
        subject_id=manifest.subject_id,
        started_at=manifest.started_at,
        status=manifest.status,
        duration_ms=manifest.duration_ms,
        segment_count=len(manifest.segments),
        attested_count=sum(1 for s in manifest.segments if s.attested),
        quarantined_count=len(manifest.quarantined),
        unanalyzed_count=len(manifest.unanalyzed),
        scenario_seed=manifest.scenario_seed,
        segments=[
            SegmentSummary(seq=s.seq, file_path=s.file_path, byte_len=s.byte_len, attested=s.attested)
            for s in manifest.segments
        ],
    )


def _parse_streams(streams: str | None) -> list[StreamId] | None:
    if not streams:
        return None
    out = []
    for name in streams.split(","):
        name = name.strip()
        if not name:
            continue
        try:
            out.append(StreamId(name))
        except ValueError:
            raise HTTPException(status_code=404, detail=f"unknown stream {name!r}")
    return out or None


def _parse_cursor(cursor: str | None) -> tuple[int, int, int] | None:
    if not cursor:
        return None
    try:
        t_ms, stream_idx, seq = (int(part) for part in cursor.split(":"))
        return (t_ms, stream_idx, seq)
    except ValueError:
        raise HTTPException(status_code=422, detail=f"malformed cursor {cursor!r}")


def create_control_app(
    data_dir: str | Path,
    attestation_url: str | None = None,
    token: str | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    attestation: AttestationClient
    if attestation_url:
        attestation = HttpAttestationClient(attestation_url)
    else:
        attestation = AttestationService(data_dir / "attestation")
    state = ControlState(data_dir, attestation, token=token)

    app = FastAPI(title="first-person recorder control", version="0.1.0")
    app.state.control = state

    def require_auth(authorization: str | None = None) -> None:
        if state.token and authorization != f"Bearer {state.token}":
            raise HTTPException(status_code=401, detail="missing or invalid bearer token")

    from fastapi import Header

    def auth_dep(authorization: Optional[str] = Header(default=None)) -> None:
        require_auth(authorization)

    guarded = [Depends(auth_dep)]

    @app.get("/health")
    def health() -> dict:
        return {"ok": True}

    # -- sessions -----------------------------------------------------------

    @app.post("/sessions", status_code=201, response_model=StartSessionResponse, dependencies=guarded)
    def start_session(request: StartSessionRequest) -> StartSessionResponse:
        config = merge_config(request.config)
        violations = validate_config(config)
        if violations:
            raise HTTPException(status_code=422, detail=[v.to_jsonable() for v in violations])
        if request.scenario is not None:
            raw = dict(request.scenario)
            if request.duration_ms:
                raw["duration_ms"] = request.duration_ms
            if request.seed is not None:
                raw["seed"] = request.seed
            try:
                scenario = parse_scenario(raw)
            except ScenarioError as exc:
                raise HTTPException(
                    status_code=422,
                    detail=[{"path": "scenario", "rule": "valid scenario", "message": p} for p in exc.problems],
                )
        else:
            scenario = make_demo_scenario(
                seed=request.seed if request.seed is not None else 0,
                duration_ms=request.duration_ms or 60_000,
            )
        try:
            build_drivers(config, scenario)  # cheap feasibility probe (byte targets)
        except ConfigurationError as exc:
            raise HTTPException(
                status_code=422,
                detail=[{"path": "targets_kb_s", "rule": "reachable byte target", "message": str(exc)}],
            )

        session = RecorderSession(
            state.store,
            config,
            scenario,
            state.attestation,
            registry=state.registry,
            realtime=request.realtime,
            live_tap=None,
        )
        sid = session.session_id
        session.set_live_tap(lambda envelope: state.hub.publish(sid, envelope))

        def run() -> None:
            try:
                session.run()
            except Exception:
                logger.exception("session %s failed", sid)
            finally:
                state.hub.close_session(sid)

        thread = threading.Thread(target=run, name=f"session-{sid[:8]}", daemon=True)
        with state.lock:
            state.active[sid] = (session, thread)
        thread.start()
        return StartSessionResponse(session_id=sid)

    @app.get("/sessions", response_model=list[SessionSummary], dependencies=guarded)
    def list_sessions() -> list[SessionSummary]:
        state.reap()
        return [_summary(m) for m in state.store.list_sessions()]

    @app.get("/sessions/{session_id}", response_model=SessionSummary, dependencies=guarded)
    def get_session(session_id: str) -> SessionSummary:
        state.reap()
        try:
            reader = state.store.open(session_id)
        except SessionNotFound:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return _summary(reader.manifest)

    @app.post("/sessions/{session_id}/stop", response_model=StopResponse, dependencies=guarded)
    def stop_session(session_id: str) -> StopResponse:
        with state.lock:
            entry = state.active.get(session_id)
        if entry is None:
            try:
                reader = state.store.open(session_id)
            except SessionNotFound:
                raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
            raise HTTPException(status_code=409, detail=f"session already {reader.manifest.status}")
        session, thread = entry
        if not thread.is_alive():
            state.reap()
            raise HTTPException(status_code=409, detail="session already stopped")
        session.request_stop()
        thread.join(timeout=30.0)
        state.reap()
        try:
            status = state.store.open(session_id).manifest.status
        except SessionNotFound:  # pragma: no cover - defensive
            status = "unknown"
        return StopResponse(session_id=session_id, status=status)

    @app.get("/sessions/{session_id}/samples", response_model=SamplesPage, dependencies=guarded)
    def get_samples(
        session_id: str,
        streams: Optional[str] = None,
        from_ms: Optional[int] = Query(default=None, ge=0),
        to_ms: Optional[int] = Query(default=None, ge=0),
        cursor: Optional[str] = None,
        limit: int = Query(default=1000, ge=1, le=10000),
    ) -> SamplesPage:
        try:
            reader = state.store.open(session_id)
        except SessionNotFound:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        wanted = _parse_streams(streams)
        after = _parse_cursor(cursor)
        samples = reader.query(wanted, from_ms, to_ms)
        if after is not None:
            samples = [
                s
                for s in samples
                if (s["t_ms"], STREAM_ORDER[StreamId(s["stream"])], s["seq_in_stream"]) > after
            ]
        page = samples[:limit]
        next_cursor = None
        if len(samples) > limit and page:
            last = page[-1]
            next_cursor = f"{last['t_ms']}:{STREAM_ORDER[StreamId(last['stream'])]}:{last['seq_in_stream']}"
        return SamplesPage(samples=page, next_cursor=next_cursor)

    @app.get("/sessions/{session_id}/rate-report", dependencies=guarded)
    def get_rate_report(session_id: str) -> JSONResponse:
        try:
            reader = state.store.open(session_id)
        except SessionNotFound:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        if reader.manifest.duration_ms <= 0:
            raise HTTPException(status_code=409, detail="session still open; no duration to report")
        return JSONResponse(rate_report(reader).to_jsonable())

    @app.get("/sessions/{session_id}/verify", response_model=VerifyResponse, dependencies=guarded)
    def get_verify(session_id: str) -> VerifyResponse:
        session_dir = state.store.session_dir(session_id)
        if not (session_dir / "manifest.json").exists():
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        verdict = verify_chain(session_dir, state.attestation)
        return VerifyResponse(**verdict.to_jsonable())

    @app.get("/sessions/{session_id}/media/{subpath:path}", dependencies=guarded)
    def get_media(session_id: str, subpath: str) -> FileResponse:
        try:
            reader = state.store.open(session_id)
        except SessionNotFound:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        path = reader.media_path(f"media/{subpath}")
        if not path.is_file():
            raise HTTPException(status_code=404, detail="no such media object")
        return FileResponse(path, media_type=MEDIA_TYPES.get(path.suffix, "application/octet-stream"))

    # -- projections & config ----------------------------------------------

    @app.get("/projections", response_model=ProjectionResponse, dependencies=guarded)
    def get_projection(target_gb: float = Query(gt=0), mode: str = Query(pattern="^(full|text)$")) -> ProjectionResponse:
        projection = project_recording_days(target_gb, mode, state.defaults["targets_kb_s"])
        return ProjectionResponse(**projection.to_jsonable())

    @app.get("/config", dependencies=guarded)
    def get_config() -> JSONResponse:
        return JSONResponse(state.defaults)

    @app.put("/config", dependencies=guarded)
    def put_config(overrides: dict[str, Any]) -> JSONResponse:
        merged = merge_config(overrides)
        violations = validate_config(merged)
        if violations:
            raise HTTPException(status_code=422, detail=[v.to_jsonable() for v in violations])
        state.defaults = merged
        state.save_defaults()
        return JSONResponse(state.defaults)

    # -- consent -------------------------------------------------------------

    @app.get("/consent", response_model=list[ConsentRecordModel], dependencies=guarded)
    def list_consent() -> list[ConsentRecordModel]:
        return [ConsentRecordModel(**r.to_jsonable()) for r in state.registry.records()]

    @app.post("/consent", status_code=201, response_model=ConsentRecordModel, dependencies=guarded)
    def add_consent(record: ConsentRecordModel) -> ConsentRecordModel:
        try:
            state.registry.add(
                ConsentRecord(
                    person_id=record.person_id,
                    face_signature=record.face_signature,
                    scope_global=record.scope_global,
                    granted_to=tuple(record.granted_to),
                )
            )
        except ValueError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        state.save_registry()
        return record

    @app.delete("/consent/{person_id}", status_code=204, dependencies=guarded)
    def delete_consent(person_id: str) -> None:
        if not state.registry.remove(person_id):
            raise HTTPException(status_code=404, detail=f"no consent record for {person_id!r}")
        state.save_registry()

    # -- schemas --------------------------------------------------------------

    @app.get("/schemas", dependencies=guarded)
    def list_schemas() -> JSONResponse:
        return JSONResponse({"schemas": sorted(all_schemas().keys())})

    @app.get("/schemas/{name}", dependencies=guarded)
    def get_schema(name: str) -> JSONResponse:
        schemas = all_schemas()
        if name not in schemas:
            raise HTTPException(status_code=404, detail=f"unknown schema {name!r}")
        return JSONResponse(schemas[name])

    # -- live WebSocket -------------------------------------------------------

    @app.websocket("/live/{session_id}")
    async def live(
        websocket: WebSocket,
        session_id: str,
        streams: Optional[str] = None,
        capacity: int = Query(default=DEFAULT_CAPACITY, ge=1, le=65536),
        token: Optional[str] = None,
    ) -> None:
        if state.token and token != state.token:
            await websocket.close(code=4401)
            return
        with state.lock:
            known = session_id in state.active
        if not known and not (state.store.session_dir(session_id) / "manifest.json").exists():
            await websocket.close(code=4404)
            return
        wanted: set[str] | None = None
        if streams:
            wanted = {name.strip() for name in streams.split(",") if name.strip()}
        subscription = state.hub.subscribe(session_id, wanted, capacity)
        await websocket.accept()
        reported_drops = 0
        try:
            while True:
                batch = subscription.poll()
                if not batch and subscription.closed:
                    await websocket.send_json({"type": "closed", "dropped": subscription.dropped})
                    break
                for envelope in batch:
                    await websocket.send_json({"type": "sample", "envelope": envelope})
                if subscription.dropped != reported_drops:
                    reported_drops = subscription.dropped
                    await websocket.send_json({"type": "drops", "count": reported_drops})
                if not batch:
                    await asyncio.sleep(0.01)
        except WebSocketDisconnect:
            pass
        finally:
            state.hub.unsubscribe(session_id, subscription)

    # -- optional static UI ---------------------------------------------------

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app

"""End-to-end session runner: drivers -> enrichment -> store, with live taps.

This is the composition root shared by the CLI and the control service. A
recording is fully determined by (config, scenario); the only nondeterminism
in the persisted artifact is the session id, the manifest wall-clock stamp,
and the service-issued attestation values in the chain headers (segment
content digests are reproducible).
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from typing import Any, Callable

from .enrich.clients import (
    FaceDetectClient,
    ImageAnalysisClient,
    SentimentClient,
    TranscribeClient,
)
from .enrich.pipeline import EnrichmentPipeline
from .integrity import AttestationClient
from .model.documents import ConsentRegistry
from .model.streams import SampleEnvelope
from .rates import RateReport, rate_report
from .sim.base import Emission
from .sim.runner import RunReport, build_drivers, run_drivers
from .sim.scenario import ScenarioScript
from .store import SessionStore, SessionWriter

logger = logging.getLogger(__name__)

# Envelopes that already passed redaction, for live subscribers.
LiveTap = Callable[[SampleEnvelope], None]


@dataclass
class RecordingResult:
    session_id: str
    session_dir: str
    manifest_path: str
    run_report: RunReport
    rate_report: RateReport


class RecorderSession:
    """One recording, runnable synchronously or on a background thread."""

    def __init__(
        self,
        store: SessionStore,
        config: dict[str, Any],
        scenario: ScenarioScript,
        attestation: AttestationClient | None,
        registry: ConsentRegistry | None = None,
        realtime: bool = False,
        live_tap: LiveTap | None = None,
        transcribe_client: TranscribeClient | None = None,
        sentiment_client: SentimentClient | None = None,
        image_client: ImageAnalysisClient | None = None,
        face_client: FaceDetectClient | None = None,
    ) -> None:
        self._store = store
        self._config = config
        self._scenario = scenario
        self._realtime = realtime
        self._live_tap = live_tap
        self._stop = threading.Event()
        self._registry = registry if registry is not None else ConsentRegistry()
        self._pipeline = EnrichmentPipeline(
            config,
            self._registry,
            transcribe_client=transcribe_client,
            sentiment_client=sentiment_client,
            image_client=image_client,
            face_client=face_client,
        )
        self.writer: SessionWriter = store.create_session(
            config,
            attestation,
            scenario_jsonable=scenario.to_jsonable(),
            scenario_seed=scenario.seed,
        )
        self.result: RecordingResult | None = None
        self.error: str | None = None

    @property
    def session_id(self) -> str:
        return self.writer.session_id

    def set_live_tap(self, tap: LiveTap | None) -> None:
        """Install the preview fan-out; must happen before run()."""
        self._live_tap = tap

    def request_stop(self) -> None:
        self._stop.set()

    @property
    def stopped(self) -> bool:
        return self._stop.is_set()

    def _sink(self, emission: Emission) -> None:
        result = self._pipeline.process(emission)
        for entry in result.quarantined:
            self.writer.record_quarantine(entry)
        for entry in result.unanalyzed:
            self.writer.record_unanalyzed(entry)
        for envelope, media in result.persist:
            self.writer.append(envelope, media)
            if self._live_tap is not None:
                self._live_tap(envelope)

    def run(self) -> RecordingResult:
        sid = self.writer.session_id
        try:
            drivers = build_drivers(self._config, self._scenario)
            report = run_drivers(
                drivers,
                self._scenario,
                self._sink,
                realtime=self._realtime,
                should_stop=self._stop.is_set,
            )
            tail = self._pipeline.close(report.duration_ms)
            for entry in tail.quarantined:
                self.writer.record_quarantine(entry)
            for entry in tail.unanalyzed:
                self.writer.record_unanalyzed(entry)
            for envelope, media in tail.persist:
                self.writer.append(envelope, media)
                if self._live_tap is not None:
                    self._live_tap(envelope)
            self.writer.close(report.duration_ms)
        except Exception as exc:
            self.error = str(exc)
            self.writer.abort(str(exc))
            self._store.finish(sid)
            raise
        self._store.finish(sid)
        reader = self._store.open(sid)
        self.result = RecordingResult(
            session_id=sid,
            session_dir=str(self.writer.directory),
            manifest_path=str(self.writer.directory / "manifest.json"),
            run_report=report,
            rate_report=rate_report(reader),
        )
        return self.result


def record_session(
    store: SessionStore,
    config: dict[str, Any],
    scenario: ScenarioScript,
    attestation: AttestationClient | None,
    registry: ConsentRegistry | None = None,
    realtime: bool = False,
    live_tap: LiveTap | None = None,
    **client_overrides: Any,
) -> RecordingResult:
    """Convenience wrapper: run one full session synchronously."""
    session = RecorderSession(
        store,
        config,
        scenario,
        attestation,
        registry=registry,
        realtime=realtime,
        live_tap=live_tap,
        **client_overrides,
    )
    return session.run()

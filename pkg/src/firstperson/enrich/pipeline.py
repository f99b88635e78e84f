"""Enrichment stage: turns raw emissions into raw + derived persistable samples.

Privacy-critical work (face redaction) happens synchronously per frame and
strictly before anything is persisted or fanned out. The other analyzers run
inline on the mock clients; their failures mark the source sample
unanalyzed in the manifest and never stall the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..model.documents import ConsentRegistry
from ..model.streams import (
    ImageLabelsPayload,
    ImageTextPayload,
    SampleEnvelope,
    SentimentPayload,
    StreamId,
    TimeSpan,
    TranscriptPayload,
)
from ..sim.base import Emission
from .bandpower import BandPowerAnalyzer
from .blur import FrameQuarantined, blur_frame
from .clients import (
    AnalyzerError,
    FaceDetectClient,
    ImageAnalysisClient,
    LexiconSentimentClient,
    MockFaceDetectClient,
    MockImageAnalysisClient,
    MockTranscribeClient,
    SentimentClient,
    TranscribeClient,
)
from .des import DesSpotter


@dataclass
class PipelineResult:
    """What one emission produced: samples to persist plus bookkeeping."""

    persist: list[tuple[SampleEnvelope, bytes | None]] = field(default_factory=list)
    quarantined: list[dict[str, Any]] = field(default_factory=list)
    unanalyzed: list[dict[str, Any]] = field(default_factory=list)


class EnrichmentPipeline:
    def __init__(
        self,
        config: dict[str, Any],
        registry: ConsentRegistry,
        transcribe_client: TranscribeClient | None = None,
        sentiment_client: SentimentClient | None = None,
        image_client: ImageAnalysisClient | None = None,
        face_client: FaceDetectClient | None = None,
    ) -> None:
        self._config = config
        self._subject = config["subject_id"]
        self._registry = registry
        analysis = config["analysis"]
        self._transcribe = transcribe_client if analysis["transcribe"] else None
        if self._transcribe is None and analysis["transcribe"]:
            self._transcribe = MockTranscribeClient()
        self._sentiment = sentiment_client if analysis["sentiment"] else None
        if self._sentiment is None and analysis["sentiment"]:
            self._sentiment = LexiconSentimentClient()
        want_image = analysis["image_text"] or analysis["image_labels"]
        self._image = image_client if want_image else None
        if self._image is None and want_image:
            self._image = MockImageAnalysisClient()
        self._face = face_client or MockFaceDetectClient(registry)

        self._bandpower: BandPowerAnalyzer | None = None
        if config["eeg"]["enabled"] and config["bandpower"]["enabled"]:
            self._bandpower = BandPowerAnalyzer(
                fs=float(config["eeg"]["rate"]),
                window_s=float(config["bandpower"]["window_s"]),
                hop_s=float(config["bandpower"]["hop_s"]),
            )
        self._des = DesSpotter(config["des"]["start_phrase"], config["des"]["end_phrase"])
        self._frame_target_bytes = int(
            round(float(config["targets_kb_s"][StreamId.IMAGE_FRAME.value]) * 1000.0 / float(config["image"]["rate"]))
        )
        self._seq: dict[StreamId, int] = {
            StreamId.AUDIO_TEXT: 0,
            StreamId.SPEECH_SENTIMENT: 0,
            StreamId.DES_REPORT: 0,
            StreamId.IMAGE_TEXT: 0,
            StreamId.IMAGE_LABELS: 0,
        }
        self._last_transcript_t_ms = 0

    def _next_seq(self, stream: StreamId) -> int:
        seq = self._seq[stream]
        self._seq[stream] = seq + 1
        return seq

    def process(self, emission: Emission) -> PipelineResult:
        result = PipelineResult()
        stream = emission.envelope.stream
        if stream is StreamId.IMAGE_FRAME:
            self._process_frame(emission, result)
        elif stream is StreamId.AUDIO_CHUNK:
            result.persist.append((emission.envelope, emission.media))
            self._process_chunk(emission, result)
        elif stream is StreamId.EEG_RAW:
            result.persist.append((emission.envelope, emission.media))
            if self._bandpower is not None:
                for derived in self._bandpower.process(emission.envelope):
                    result.persist.append((derived, None))
        else:
            result.persist.append((emission.envelope, emission.media))
        return result

    def close(self, session_end_ms: int) -> PipelineResult:
        """Session end: flush the experience-report spotter."""
        result = PipelineResult()
        for report in self._des.flush():
            envelope = SampleEnvelope(
                stream=StreamId.DES_REPORT,
                t_ms=max(self._last_transcript_t_ms, 0),
                seq_in_stream=self._next_seq(StreamId.DES_REPORT),
                payload=report,
            )
            result.persist.append((envelope, None))
        return result

    def _process_frame(self, emission: Emission, result: PipelineResult) -> None:
        envelope = emission.envelope
        try:
            redacted = blur_frame(
                payload=envelope.payload,  # type: ignore[arg-type]
                image_bytes=emission.media or b"",
                client=self._face,
                sidecar=emission.sidecar,
                registry=self._registry,
                subject_id=self._subject,
                mode=self._config["blur"]["mode"],
                cell_px=int(self._config["blur"]["cell_px"]),
                target_bytes=self._frame_target_bytes,
            )
        except FrameQuarantined as exc:
            result.quarantined.append(
                {"stream": StreamId.IMAGE_FRAME.value, "seq": envelope.seq_in_stream, "reason": exc.reason}
            )
            return
        safe = SampleEnvelope(
            stream=StreamId.IMAGE_FRAME,
            t_ms=envelope.t_ms,
            seq_in_stream=envelope.seq_in_stream,
            payload=redacted.payload,
        )
        result.persist.append((safe, redacted.data))
        if self._image is None:
            return
        analysis = self._config["analysis"]
        try:
            texts = self._image.detect_text(emission.sidecar) if analysis["image_text"] else None
        except AnalyzerError as exc:
            result.unanalyzed.append(
                {
                    "stream": StreamId.IMAGE_FRAME.value,
                    "seq": envelope.seq_in_stream,
                    "kind": "image-analysis",
                    "reason": str(exc),
                }
            )
            return
        labels = self._image.detect_labels(emission.sidecar) if analysis["image_labels"] else None
        if texts is not None:
            result.persist.append(
                (
                    SampleEnvelope(
                        stream=StreamId.IMAGE_TEXT,
                        t_ms=envelope.t_ms,
                        seq_in_stream=self._next_seq(StreamId.IMAGE_TEXT),
                        payload=ImageTextPayload(detections=tuple(texts), ref_frame_seq=envelope.seq_in_stream),
                    ),
                    None,
                )
            )
        if labels is not None:
            result.persist.append(
                (
                    SampleEnvelope(
                        stream=StreamId.IMAGE_LABELS,
                        t_ms=envelope.t_ms,
                        seq_in_stream=self._next_seq(StreamId.IMAGE_LABELS),
                        payload=ImageLabelsPayload(detections=tuple(labels), ref_frame_seq=envelope.seq_in_stream),
                    ),
                    None,
                )
            )

    def _process_chunk(self, emission: Emission, result: PipelineResult) -> None:
        if self._transcribe is None:
            return
        envelope = emission.envelope
        try:
            utterances = self._transcribe.transcribe(emission.sidecar)
        except AnalyzerError as exc:
            result.unanalyzed.append(
                {
                    "stream": StreamId.AUDIO_CHUNK.value,
                    "seq": envelope.seq_in_stream,
                    "kind": "transcribe",
                    "reason": str(exc),
                }
            )
            return
        for utterance in utterances:
            payload = TranscriptPayload(
                text=utterance.text,
                speaker=utterance.speaker,
                span=TimeSpan(start_ms=utterance.start_ms, end_ms=utterance.end_ms),
            )
            transcript_seq = self._next_seq(StreamId.AUDIO_TEXT)
            transcript = SampleEnvelope(
                stream=StreamId.AUDIO_TEXT,
                t_ms=envelope.t_ms,
                seq_in_stream=transcript_seq,
                payload=payload,
            )
            result.persist.append((transcript, None))
            self._last_transcript_t_ms = envelope.t_ms
            if payload.speaker != "wearer":
                continue
            if self._sentiment is not None:
                try:
                    scores = self._sentiment.score(payload.text)
                except AnalyzerError as exc:
                    result.unanalyzed.append(
                        {
                            "stream": StreamId.AUDIO_TEXT.value,
                            "seq": transcript_seq,
                            "kind": "sentiment",
                            "reason": str(exc),
                        }
                    )
                    scores = None
                if scores is not None:
                    result.persist.append(
                        (
                            SampleEnvelope(
                                stream=StreamId.SPEECH_SENTIMENT,
                                t_ms=envelope.t_ms,
                                seq_in_stream=self._next_seq(StreamId.SPEECH_SENTIMENT),
                                payload=SentimentPayload(ref_transcript_seq=transcript_seq, **scores),
                            ),
                            None,
                        )
                    )
            for report in self._des.feed(payload):
                result.persist.append(
                    (
                        SampleEnvelope(
                            stream=StreamId.DES_REPORT,
                            t_ms=envelope.t_ms,
                            seq_in_stream=self._next_seq(StreamId.DES_REPORT),
                            payload=report,
                        ),
                        None,
                    )
                )

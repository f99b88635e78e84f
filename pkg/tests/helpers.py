"""Test utilities: random valid envelopes and segments."""

from __future__ import annotations

import hashlib
import random

from firstperson.model.streams import (
    AudioChunkPayload,
    BandPowerPayload,
    ChannelBandPower,
    CognitionPayload,
    DesReportPayload,
    Detection,
    EegRawPayload,
    FaceAction,
    FacialExpressionPayload,
    GsrPayload,
    ImageFramePayload,
    ImageLabelsPayload,
    ImageTextPayload,
    MediaRef,
    Rect,
    SampleEnvelope,
    SentimentPayload,
    StreamId,
    TimeSpan,
    EYE_ACTIONS,
    LOWER_FACE_ACTIONS,
    UPPER_FACE_ACTIONS,
)


def _media(rng: random.Random, ext: str) -> MediaRef:
    digest = hashlib.sha256(rng.randbytes(8)).hexdigest()
    return MediaRef(
        relative_path=f"media/{digest[:2]}/{digest}.{ext}",
        content_hash=digest,
        byte_len=rng.randint(0, 10**6),
    )


def _rect(rng: random.Random, w: int = 320, h: int = 240) -> Rect:
    x = rng.randint(0, w - 2)
    y = rng.randint(0, h - 2)
    return Rect(x=x, y=y, w=rng.randint(1, w - x), h=rng.randint(1, h - y))


def random_payload(rng: random.Random, stream: StreamId):
    if stream is StreamId.EEG_RAW:
        return EegRawPayload(channels=tuple(round(rng.uniform(-80, 80), 3) for _ in range(14)))
    if stream is StreamId.GSR:
        return GsrPayload(conductance_us=round(rng.uniform(1, 30), 4))
    if stream is StreamId.IMAGE_FRAME:
        return ImageFramePayload(
            media=_media(rng, "jpg"),
            width_px=320,
            height_px=240,
            blurred_regions=tuple(_rect(rng) for _ in range(rng.randint(0, 2))),
        )
    if stream is StreamId.AUDIO_CHUNK:
        return AudioChunkPayload(media=_media(rng, "bin"), duration_ms=rng.randint(1, 10_000))
    if stream is StreamId.EEG_BANDPOWER:
        return BandPowerPayload(
            per_channel=tuple(
                ChannelBandPower(
                    theta=rng.uniform(0, 50),
                    alpha=rng.uniform(0, 50),
                    beta_l=rng.uniform(0, 50),
                    beta_h=rng.uniform(0, 50),
                    gamma=rng.uniform(0, 50),
                )
                for _ in range(14)
            )
        )
    if stream is StreamId.FACIAL_EXPRESSION:
        return FacialExpressionPayload(
            eye_action=rng.choice(EYE_ACTIONS),
            upper_face=FaceAction(action=rng.choice(UPPER_FACE_ACTIONS), power=round(rng.random(), 3)),
            lower_face=FaceAction(action=rng.choice(LOWER_FACE_ACTIONS), power=round(rng.random(), 3)),
        )
    if stream is StreamId.COGNITION:
        return CognitionPayload(**{k: round(rng.random(), 3) for k in
                                   ("engagement", "excitement", "stress", "relaxation", "interest", "focus")})
    if stream is StreamId.AUDIO_TEXT:
        start = rng.randint(0, 50_000)
        return TranscriptPayloadFactory(rng, start)
    if stream is StreamId.SPEECH_SENTIMENT:
        weights = [rng.random() for _ in range(4)]
        total = sum(weights)
        values = [w / total for w in weights]
        return SentimentPayload(
            positive=values[0], negative=values[1], mixed=values[2], neutral=values[3],
            ref_transcript_seq=rng.randint(0, 100),
        )
    if stream is StreamId.DES_REPORT:
        start = rng.randint(0, 50_000)
        return DesReportPayload(
            text="I feel " + rng.choice(["calm", "tense", "curious"]),
            span=TimeSpan(start_ms=start, end_ms=start + rng.randint(0, 5000)),
            terminated=rng.random() < 0.8,
        )
    if stream is StreamId.IMAGE_TEXT:
        return ImageTextPayload(
            detections=tuple(
                Detection(value=rng.choice(["EXIT", "OPEN", "SALE"]), confidence=round(rng.random(), 3), box=_rect(rng))
                for _ in range(rng.randint(0, 3))
            ),
            ref_frame_seq=rng.randint(0, 100),
        )
    if stream is StreamId.IMAGE_LABELS:
        return ImageLabelsPayload(
            detections=tuple(
                Detection(value=rng.choice(["chair", "dog", "mug"]), confidence=round(rng.random(), 3), box=_rect(rng))
                for _ in range(rng.randint(0, 3))
            ),
            ref_frame_seq=rng.randint(0, 100),
        )
    raise AssertionError(stream)


def TranscriptPayloadFactory(rng: random.Random, start: int):
    from firstperson.model.streams import TranscriptPayload

    return TranscriptPayload(
        text=" ".join(rng.choice(["hello", "there", "I", "feel", "fine"]) for _ in range(rng.randint(1, 6))),
        speaker=rng.choice(("wearer", "other")),
        span=TimeSpan(start_ms=start, end_ms=start + rng.randint(0, 3000)),
    )


def random_segment_jsonable(rng: random.Random, seq: int = 0, max_samples: int = 6) -> dict:
    """A structurally valid random segment document."""
    counters: dict[StreamId, int] = {}
    clocks: dict[StreamId, int] = {}
    samples = []
    for _ in range(rng.randint(0, max_samples)):
        stream = rng.choice(list(StreamId))
        seq_in_stream = counters.get(stream, 0)
        counters[stream] = seq_in_stream + 1
        t_ms = clocks.get(stream, 0) + rng.randint(0, 500)
        clocks[stream] = t_ms
        envelope = SampleEnvelope(
            stream=stream, t_ms=t_ms, seq_in_stream=seq_in_stream, payload=random_payload(rng, stream)
        )
        samples.append(envelope.to_jsonable())
    return {"seq": seq, "prev_attestation": "%064x" % rng.getrandbits(256), "samples": samples}

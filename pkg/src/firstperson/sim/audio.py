"""Simulated microphone: constant-bitrate opaque audio chunks.

No codec is modelled; a chunk is a deterministic pseudo-random blob sized to
the configured byte rate (a constant-bitrate stream records silence and
speech at the same size). Each chunk's emission sidecar lists the scenario
utterances whose start falls inside the chunk window, for the mock
transcription client.

A chunk's content is fully determined by the scenario at the window's start,
so it is emitted at the window start with t_ms = window start; that keeps
the merged sink stream sorted without a reorder buffer.
"""

from __future__ import annotations

import hashlib
from typing import Any

from ..model.streams import AudioChunkPayload, SampleEnvelope, StreamId
from .base import Emission
from .scenario import ScenarioScript, utterance_span

AUDIO_EXT = "bin"


class AudioDriver:
    streams = (StreamId.AUDIO_CHUNK,)

    def __init__(self, config: dict[str, Any], scenario: ScenarioScript) -> None:
        self._chunk_ms = int(float(config["audio"]["chunk_s"]) * 1000)
        target_kb_s = float(config["targets_kb_s"][StreamId.AUDIO_CHUNK.value])
        self._bytes_per_ms = target_kb_s  # KB/s == bytes per ms
        self._duration_ms = scenario.duration_ms
        self._scenario = scenario
        self._seed = scenario.seed
        self._seq = 0

    def _window(self, n: int) -> tuple[int, int]:
        start = n * self._chunk_ms
        return start, min(start + self._chunk_ms, self._duration_ms)

    def _blob(self, n: int, size: int) -> bytes:
        # Deterministic filler: SHA-256 keystream over (seed, chunk index).
        out = bytearray()
        counter = 0
        seed = f"audio:{self._seed}:{n}".encode("ascii")
        while len(out) < size:
            out.extend(hashlib.sha256(seed + counter.to_bytes(8, "big")).digest())
            counter += 1
        return bytes(out[:size])

    def next_batch(self, now_ms: int) -> list[Emission]:
        out: list[Emission] = []
        while True:
            start, end = self._window(self._seq)
            if start > now_ms or start >= self._duration_ms:
                break
            duration = end - start
            size = int(round(duration * self._bytes_per_ms))
            from .camera import MediaBlob

            blob = MediaBlob(self._blob(self._seq, size), AUDIO_EXT)
            utterances = [
                {
                    "speaker": event.params["speaker"],
                    "text": event.params["text"],
                    "start_ms": utterance_span(event)[0],
                    "end_ms": utterance_span(event)[1],
                }
                for event in self._scenario.by_kind("utterance")
                if start <= event.at_ms < end
            ]
            payload = AudioChunkPayload(media=blob.ref, duration_ms=duration)
            envelope = SampleEnvelope(
                stream=StreamId.AUDIO_CHUNK, t_ms=start, seq_in_stream=self._seq, payload=payload
            )
            out.append(
                Emission(envelope=envelope, sidecar={"ground_truth": {"utterances": utterances}}, media=blob.data)
            )
            self._seq += 1
        return out

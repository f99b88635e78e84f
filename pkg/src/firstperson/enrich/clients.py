"""Analyzer clients: one interface per service kind, deterministic mocks,
and stub slots where live cloud adapters would plug in.

The mocks are pure functions of the emission sidecar (scenario ground
truth), which keeps enrichment tests exact while preserving the client
interface a live adapter must satisfy. The live classes are documented
extension points only; they raise until configured with a real backend.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from importlib import resources
from typing import Any, Protocol

from ..model.streams import Detection, Rect

WEARER_SPEAKER = "wearer"


class AnalyzerError(RuntimeError):
    """A client call failed; callers decide whether to quarantine or skip."""


@dataclass(frozen=True)
class Utterance:
    text: str
    speaker: str  # "wearer" | "other" after enrollment matching
    start_ms: int
    end_ms: int


@dataclass(frozen=True)
class FaceDetection:
    box: Rect
    person_id: str | None  # None: face found but not matched to any enrollment


class TranscribeClient(Protocol):
    def transcribe(self, sidecar: dict[str, Any] | None) -> list[Utterance]: ...


class SentimentClient(Protocol):
    def score(self, text: str) -> dict[str, float]: ...


class ImageAnalysisClient(Protocol):
    def detect_text(self, sidecar: dict[str, Any] | None) -> list[Detection]: ...

    def detect_labels(self, sidecar: dict[str, Any] | None) -> list[Detection]: ...


class FaceDetectClient(Protocol):
    def detect_faces(self, sidecar: dict[str, Any] | None) -> list[FaceDetection]: ...


def _truth(sidecar: dict[str, Any] | None) -> dict[str, Any]:
    if not sidecar:
        return {}
    return sidecar.get("ground_truth", {})


class _Failable:
    """Mixin for mocks: raise AnalyzerError on scripted call indices."""

    def __init__(self, fail_on_calls: set[int] | None = None) -> None:
        self._fail_on = fail_on_calls or set()
        self._calls = 0

    def _tick(self) -> None:
        call = self._calls
        self._calls += 1
        if call in self._fail_on:
            raise AnalyzerError(f"injected failure on call {call}")


class MockTranscribeClient(_Failable):
    """Speaker separation by enrollment: the sidecar speaker tag either is the
    wearer's enrollment id or it is somebody else."""

    def __init__(self, wearer_speaker: str = WEARER_SPEAKER, fail_on_calls: set[int] | None = None) -> None:
        super().__init__(fail_on_calls)
        self._wearer = wearer_speaker

    def transcribe(self, sidecar: dict[str, Any] | None) -> list[Utterance]:
        self._tick()
        out = []
        for u in _truth(sidecar).get("utterances", []):
            speaker = "wearer" if u["speaker"] == self._wearer else "other"
            out.append(Utterance(text=u["text"], speaker=speaker, start_ms=u["start_ms"], end_ms=u["end_ms"]))
        return out


def _load_lexicon(name: str) -> frozenset[str]:
    text = resources.files("firstperson.enrich.data").joinpath(name).read_text(encoding="utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#"))


POSITIVE_WORDS = _load_lexicon("positive_words.txt")
NEGATIVE_WORDS = _load_lexicon("negative_words.txt")

_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


class LexiconSentimentClient(_Failable):
    """Fixed-lexicon scorer: hit counts become a simplex over the four classes.

    Weights are (positives, negatives, 2*min(pos, neg), 0.5) normalized to
    sum to one; empty text is entirely neutral. Deterministic by design so
    tests can treat the lexicon itself as the oracle.
    """

    NEUTRAL_BASELINE = 0.5

    def score(self, text: str) -> dict[str, float]:
        self._tick()
        words = [w.translate(_PUNCT_TABLE) for w in text.lower().split()]
        words = [w for w in words if w]
        if not words:
            return {"positive": 0.0, "negative": 0.0, "mixed": 0.0, "neutral": 1.0}
        pos = sum(1 for w in words if w in POSITIVE_WORDS)
        neg = sum(1 for w in words if w in NEGATIVE_WORDS)
        mixed = 2.0 * min(pos, neg)
        weights = [float(pos), float(neg), mixed, self.NEUTRAL_BASELINE]
        total = sum(weights)
        values = [w / total for w in weights]
        return {"positive": values[0], "negative": values[1], "mixed": values[2], "neutral": values[3]}


class MockImageAnalysisClient(_Failable):
    """Returns the scenario's scene text / objects with full confidence."""

    def detect_text(self, sidecar: dict[str, Any] | None) -> list[Detection]:
        self._tick()
        return [
            Detection(value=t["value"], confidence=1.0, box=Rect.from_jsonable(t["box"]))
            for t in _truth(sidecar).get("texts", [])
        ]

    def detect_labels(self, sidecar: dict[str, Any] | None) -> list[Detection]:
        return [
            Detection(value=o["label"], confidence=1.0, box=Rect.from_jsonable(o["box"]))
            for o in _truth(sidecar).get("objects", [])
        ]


class MockFaceDetectClient(_Failable):
    """Face search against the consent registry's enrollment signatures.

    Every scenario face is detected; a face resolves to a person_id only if
    some consent record's face_signature matches the simulated matcher token
    (``sig:<person_id>``). Unenrolled faces come back unidentified.
    """

    def __init__(self, registry: Any = None, fail_on_calls: set[int] | None = None) -> None:
        super().__init__(fail_on_calls)
        self._registry = registry

    @staticmethod
    def signature_for(person_id: str) -> str:
        return f"sig:{person_id}"

    def detect_faces(self, sidecar: dict[str, Any] | None) -> list[FaceDetection]:
        self._tick()
        out = []
        for face in _truth(sidecar).get("faces", []):
            person_id = None
            if self._registry is not None:
                record = self._registry.find_by_signature(self.signature_for(face["person_id"]))
                if record is not None:
                    person_id = record.person_id
            out.append(FaceDetection(box=Rect.from_jsonable(face["box"]), person_id=person_id))
        return out


class _LiveStub:
    """Placeholder for a real cloud adapter; configuration is out of scope."""

    def __init__(self, endpoint: str | None = None, credentials: dict[str, str] | None = None) -> None:
        self.endpoint = endpoint
        self.credentials = credentials or {}

    def _unconfigured(self) -> AnalyzerError:
        return AnalyzerError(
            f"{type(self).__name__} is an extension point; no live backend is bundled"
        )


class LiveTranscribeClient(_LiveStub):
    def transcribe(self, sidecar: dict[str, Any] | None) -> list[Utterance]:
        raise self._unconfigured()


class LiveSentimentClient(_LiveStub):
    def score(self, text: str) -> dict[str, float]:
        raise self._unconfigured()


class LiveImageAnalysisClient(_LiveStub):
    def detect_text(self, sidecar: dict[str, Any] | None) -> list[Detection]:
        raise self._unconfigured()

    def detect_labels(self, sidecar: dict[str, Any] | None) -> list[Detection]:
        raise self._unconfigured()


class LiveFaceDetectClient(_LiveStub):
    def detect_faces(self, sidecar: dict[str, Any] | None) -> list[FaceDetection]:
        raise self._unconfigured()

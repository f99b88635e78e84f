"""Experience-report spotting on the wearer's transcript stream.

Reports are bracketed by spoken key phrases (defaults "start ziggy" /
"end ziggy"). Matching is case-insensitive on whitespace-normalized text and
works across transcript boundaries. Repeated start phrases inside an open
report are absorbed; a report still open when the session ends is emitted
with terminated=False.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model.streams import DesReportPayload, TimeSpan, TranscriptPayload


def _tokens(text: str) -> list[str]:
    return text.split()


def _phrase_tokens(phrase: str) -> list[str]:
    return phrase.lower().split()


@dataclass
class _OpenReport:
    words: list[str]
    start_ms: int
    end_ms: int


class DesSpotter:
    """Stateful phrase-bracket scanner over wearer transcript samples."""

    def __init__(self, start_phrase: str = "start ziggy", end_phrase: str = "end ziggy") -> None:
        self._start = _phrase_tokens(start_phrase)
        self._end = _phrase_tokens(end_phrase)
        if not self._start or not self._end or self._start == self._end:
            raise ValueError("start and end phrases must be non-empty and distinct")
        self._open: _OpenReport | None = None

    def feed(self, transcript: TranscriptPayload) -> list[DesReportPayload]:
        """Consume one wearer transcript; returns reports closed by it."""
        if transcript.speaker != "wearer":
            return []
        reports: list[DesReportPayload] = []
        words = _tokens(transcript.text)
        lowered = [w.lower() for w in words]
        i = 0
        while i < len(words):
            if self._open is None:
                hit = self._find(lowered, self._start, i)
                if hit is None:
                    break
                self._open = _OpenReport(words=[], start_ms=transcript.span.start_ms, end_ms=transcript.span.end_ms)
                i = hit + len(self._start)
                continue
            # Inside a report: the closing phrase wins; extra start phrases
            # are absorbed; everything else is report text.
            if lowered[i : i + len(self._end)] == self._end:
                reports.append(
                    DesReportPayload(
                        text=" ".join(self._open.words),
                        span=TimeSpan(start_ms=self._open.start_ms, end_ms=transcript.span.end_ms),
                        terminated=True,
                    )
                )
                self._open = None
                i += len(self._end)
                continue
            if lowered[i : i + len(self._start)] == self._start:
                i += len(self._start)
                continue
            self._open.words.append(words[i])
            self._open.end_ms = transcript.span.end_ms
            i += 1
        if self._open is not None:
            self._open.end_ms = max(self._open.end_ms, transcript.span.end_ms)
        return reports

    def flush(self) -> list[DesReportPayload]:
        """Close the session: an open report is emitted unterminated."""
        if self._open is None:
            return []
        report = DesReportPayload(
            text=" ".join(self._open.words),
            span=TimeSpan(start_ms=self._open.start_ms, end_ms=self._open.end_ms),
            terminated=False,
        )
        self._open = None
        return [report]

    @staticmethod
    def _find(lowered: list[str], phrase: list[str], start: int) -> int | None:
        for i in range(start, len(lowered) - len(phrase) + 1):
            if lowered[i : i + len(phrase)] == phrase:
                return i
        return None


def spot_des(
    transcripts: list[TranscriptPayload],
    start_phrase: str = "start ziggy",
    end_phrase: str = "end ziggy",
) -> list[DesReportPayload]:
    """Batch convenience over a finished transcript sequence."""
    spotter = DesSpotter(start_phrase, end_phrase)
    reports: list[DesReportPayload] = []
    for transcript in transcripts:
        reports.extend(spotter.feed(transcript))
    reports.extend(spotter.flush())
    return reports

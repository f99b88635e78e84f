"""Scenario scripts: deterministic event timelines that replace the world.

A scenario fully determines what the simulated sensors "see and hear" —
utterances, faces, on-scene text and objects, skin-conductance events, EEG
tones, and headset state — so a recording is reproducible from
(seed, config, scenario) alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..model.streams import (
    COGNITION_KEYS,
    EEG_CHANNELS,
    EYE_ACTIONS,
    LOWER_FACE_ACTIONS,
    UPPER_FACE_ACTIONS,
    Rect,
)

EVENT_KINDS = (
    "utterance",
    "face",
    "scene_text",
    "scene_object",
    "gsr_event",
    "eeg_tone",
    "cognition_set",
    "expression_set",
)

# Words per minute drives default utterance length: ~170 wpm.
_MS_PER_WORD = 350

NYQUIST_HZ = 64.0


class ScenarioError(ValueError):
    """Scenario rejected; message lists every problem found."""

    def __init__(self, problems: list[str]) -> None:
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class ScenarioEvent:
    at_ms: int
    kind: str
    params: dict[str, Any]

    @property
    def span_ms(self) -> int:
        return int(self.params.get("span_ms", self.params.get("duration_ms", 0)))

    @property
    def end_ms(self) -> int:
        return self.at_ms + self.span_ms

    def active_at(self, t_ms: int) -> bool:
        return self.at_ms <= t_ms < max(self.end_ms, self.at_ms + 1)

    def to_jsonable(self) -> dict[str, Any]:
        return {"at_ms": self.at_ms, "kind": self.kind, **self.params}


@dataclass(frozen=True)
class ScenarioScript:
    seed: int
    duration_ms: int
    events: tuple[ScenarioEvent, ...] = ()

    def by_kind(self, kind: str) -> list[ScenarioEvent]:
        return [e for e in self.events if e.kind == kind]

    def active(self, kind: str, t_ms: int) -> list[ScenarioEvent]:
        return [e for e in self.events if e.kind == kind and e.active_at(t_ms)]

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "duration_ms": self.duration_ms,
            "events": [e.to_jsonable() for e in self.events],
        }


def _problems_for_event(i: int, event: dict[str, Any], duration_ms: int) -> list[str]:
    out: list[str] = []
    where = f"events[{i}]"
    kind = event.get("kind")
    if kind not in EVENT_KINDS:
        return [f"{where}: unknown kind {kind!r}"]
    at_ms = event.get("at_ms")
    if not isinstance(at_ms, int) or at_ms < 0:
        return [f"{where}: at_ms must be a non-negative integer"]
    if at_ms >= duration_ms:
        out.append(f"{where}: at_ms {at_ms} is outside the {duration_ms} ms scenario")

    span = event.get("span_ms", event.get("duration_ms"))
    if span is not None:
        if not isinstance(span, int) or span <= 0:
            out.append(f"{where}: span_ms must be a positive integer")
        elif at_ms + span > duration_ms:
            out.append(f"{where}: span ends at {at_ms + span} ms, beyond the scenario")

    def need(fields: tuple[str, ...]) -> None:
        for name in fields:
            if name not in event:
                out.append(f"{where}: {kind} requires {name!r}")

    if kind == "utterance":
        need(("text", "speaker"))
        if not isinstance(event.get("text"), str) or not event.get("text", "").strip():
            out.append(f"{where}: utterance text must be non-empty")
    elif kind == "face":
        need(("person_id", "box", "span_ms"))
    elif kind == "scene_text":
        need(("value", "box", "span_ms"))
    elif kind == "scene_object":
        need(("label", "box", "span_ms"))
    elif kind == "gsr_event":
        amp = event.get("amplitude_us")
        if not isinstance(amp, (int, float)) or isinstance(amp, bool) or amp <= 0:
            out.append(f"{where}: gsr_event needs amplitude_us > 0")
    elif kind == "eeg_tone":
        need(("freq_hz", "channels", "span_ms"))
        freq = event.get("freq_hz")
        if not isinstance(freq, (int, float)) or isinstance(freq, bool) or freq <= 0:
            out.append(f"{where}: eeg_tone needs freq_hz > 0")
        elif freq >= NYQUIST_HZ:
            out.append(f"{where}: freq_hz {freq} is at or above the {NYQUIST_HZ} Hz limit")
        channels = event.get("channels")
        if not isinstance(channels, list) or not channels or any(
            not isinstance(c, int) or c < 0 or c >= EEG_CHANNELS for c in channels
        ):
            out.append(f"{where}: channels must list indices in [0, {EEG_CHANNELS})")
    elif kind == "cognition_set":
        need(("values", "span_ms"))
        values = event.get("values")
        if not isinstance(values, dict) or set(values) != set(COGNITION_KEYS):
            out.append(f"{where}: values must cover exactly {COGNITION_KEYS}")
        else:
            for key, v in values.items():
                if not isinstance(v, (int, float)) or isinstance(v, bool) or not 0 <= v <= 1:
                    out.append(f"{where}: values.{key} must be in [0, 1]")
    elif kind == "expression_set":
        need(("span_ms",))
        if event.get("eye_action", "neutral") not in EYE_ACTIONS:
            out.append(f"{where}: unknown eye_action")
        upper = event.get("upper_face", {"action": "neutral", "power": 0.0})
        lower = event.get("lower_face", {"action": "neutral", "power": 0.0})
        if not isinstance(upper, dict) or upper.get("action") not in UPPER_FACE_ACTIONS:
            out.append(f"{where}: unknown upper_face action")
        if not isinstance(lower, dict) or lower.get("action") not in LOWER_FACE_ACTIONS:
            out.append(f"{where}: unknown lower_face action")

    for box_key in ("box",):
        if box_key in event and kind in ("face", "scene_text", "scene_object"):
            try:
                Rect.from_jsonable(event[box_key])
            except (ValueError, KeyError, TypeError) as exc:
                out.append(f"{where}: bad box: {exc}")
    return out


def parse_scenario(data: dict[str, Any]) -> ScenarioScript:
    """Validate and build a ScenarioScript from parsed JSON."""
    problems: list[str] = []
    if not isinstance(data, dict):
        raise ScenarioError(["scenario must be a JSON object"])
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or seed < 0 or seed >= 2**64:
        problems.append("seed must be an integer in [0, 2^64)")
    duration_ms = data.get("duration_ms")
    if not isinstance(duration_ms, int) or duration_ms <= 0:
        problems.append("duration_ms must be a positive integer")
        raise ScenarioError(problems)

    raw_events = data.get("events", [])
    if not isinstance(raw_events, list):
        problems.append("events must be an array")
        raise ScenarioError(problems)

    events: list[ScenarioEvent] = []
    last_at = -1
    for i, raw in enumerate(raw_events):
        if not isinstance(raw, dict):
            problems.append(f"events[{i}]: must be an object")
            continue
        problems.extend(_problems_for_event(i, raw, duration_ms))
        at_ms = raw.get("at_ms")
        if isinstance(at_ms, int):
            if at_ms < last_at:
                problems.append(f"events[{i}]: events must be sorted by at_ms")
            last_at = max(last_at, at_ms)
        params = {k: v for k, v in raw.items() if k not in ("at_ms", "kind")}
        if raw.get("kind") == "utterance" and "duration_ms" not in params:
            words = len(str(params.get("text", "")).split())
            params["duration_ms"] = max(1000, words * _MS_PER_WORD)
        events.append(ScenarioEvent(at_ms=at_ms if isinstance(at_ms, int) else 0, kind=raw.get("kind", ""), params=params))

    if problems:
        raise ScenarioError(problems)
    return ScenarioScript(seed=seed, duration_ms=duration_ms, events=tuple(events))


def load_scenario(path: str | Path) -> ScenarioScript:
    return parse_scenario(json.loads(Path(path).read_text(encoding="utf-8")))


def utterance_span(event: ScenarioEvent) -> tuple[int, int]:
    return event.at_ms, event.at_ms + int(event.params["duration_ms"])


def make_demo_scenario(seed: int = 0, duration_ms: int = 60_000) -> ScenarioScript:
    """A small, fully-featured default timeline scaled to the duration."""

    def at(fraction: float) -> int:
        return int(duration_ms * fraction)

    span = max(2000, duration_ms // 6)
    events: list[dict[str, Any]] = [
        {"at_ms": 0, "kind": "eeg_tone", "freq_hz": 10.0, "channels": [0, 1], "span_ms": min(duration_ms, at(0.5) or duration_ms)},
        {"at_ms": at(0.05), "kind": "cognition_set", "span_ms": span,
         "values": {"engagement": 0.7, "excitement": 0.6, "stress": 0.9, "relaxation": 0.2, "interest": 0.8, "focus": 0.75}},
        {"at_ms": at(0.05), "kind": "expression_set", "span_ms": span, "eye_action": "blink",
         "upper_face": {"action": "surprise", "power": 0.6}, "lower_face": {"action": "smile", "power": 0.8}},
        {"at_ms": at(0.1), "kind": "face", "person_id": "person-demo-a", "box": {"x": 96, "y": 72, "w": 128, "h": 160}, "span_ms": span},
        {"at_ms": at(0.15), "kind": "scene_text", "value": "EXIT", "box": {"x": 360, "y": 60, "w": 140, "h": 48}, "span_ms": span},
        {"at_ms": at(0.2), "kind": "scene_object", "label": "burger", "box": {"x": 340, "y": 280, "w": 160, "h": 120}, "span_ms": span},
        {"at_ms": at(0.2), "kind": "gsr_event", "amplitude_us": 3.0},
        {"at_ms": at(0.25), "kind": "utterance", "speaker": "wearer", "text": "what a lovely morning"},
        {"at_ms": at(0.35), "kind": "utterance", "speaker": "companion", "text": "shall we get breakfast"},
        {"at_ms": at(0.45), "kind": "utterance", "speaker": "wearer",
         "text": "start ziggy I notice a burger and I feel hungry end ziggy"},
        {"at_ms": at(0.6), "kind": "utterance", "speaker": "wearer", "text": "that was terrible coffee"},
    ]
    events.sort(key=lambda e: e["at_ms"])
    return parse_scenario({"seed": seed, "duration_ms": duration_ms, "events": events})

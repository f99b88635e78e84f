"""Simulated headset state service: facial expression and cognition streams.

The real counterparts are produced by the headset vendor's service rather
than by local signal processing, so here they follow the scenario directly:
during an active cognition_set / expression_set event the scripted values
are emitted, otherwise neutral defaults (all cognition metrics 0.5, neutral
actions with zero power).
"""

from __future__ import annotations

from typing import Any

from ..model.streams import (
    COGNITION_KEYS,
    CognitionPayload,
    FaceAction,
    FacialExpressionPayload,
    SampleEnvelope,
    StreamId,
)
from .base import Emission
from .scenario import ScenarioScript

NEUTRAL_COGNITION = {key: 0.5 for key in COGNITION_KEYS}


class HeadsetStateDriver:
    streams = (StreamId.FACIAL_EXPRESSION, StreamId.COGNITION)

    def __init__(self, config: dict[str, Any], scenario: ScenarioScript) -> None:
        self._rate = float(config["headset"]["rate"])
        self._duration_ms = scenario.duration_ms
        self._scenario = scenario
        self._seq = 0  # shared tick counter; both streams emit each tick

    def _t_ms(self, n: int) -> int:
        return int(n * 1000.0 / self._rate)

    def _cognition(self, t_ms: int) -> CognitionPayload:
        values = dict(NEUTRAL_COGNITION)
        for event in self._scenario.active("cognition_set", t_ms):
            values.update(event.params["values"])
        return CognitionPayload(**values)

    def _expression(self, t_ms: int) -> FacialExpressionPayload:
        eye = "neutral"
        upper = FaceAction(action="neutral", power=0.0)
        lower = FaceAction(action="neutral", power=0.0)
        for event in self._scenario.active("expression_set", t_ms):
            eye = event.params.get("eye_action", eye)
            if "upper_face" in event.params:
                upper = FaceAction(
                    action=event.params["upper_face"]["action"],
                    power=float(event.params["upper_face"]["power"]),
                )
            if "lower_face" in event.params:
                lower = FaceAction(
                    action=event.params["lower_face"]["action"],
                    power=float(event.params["lower_face"]["power"]),
                )
        return FacialExpressionPayload(eye_action=eye, upper_face=upper, lower_face=lower)

    def next_batch(self, now_ms: int) -> list[Emission]:
        out: list[Emission] = []
        while True:
            t_ms = self._t_ms(self._seq)
            if t_ms > now_ms or t_ms >= self._duration_ms:
                break
            out.append(
                Emission(
                    envelope=SampleEnvelope(
                        stream=StreamId.FACIAL_EXPRESSION,
                        t_ms=t_ms,
                        seq_in_stream=self._seq,
                        payload=self._expression(t_ms),
                    )
                )
            )
            out.append(
                Emission(
                    envelope=SampleEnvelope(
                        stream=StreamId.COGNITION,
                        t_ms=t_ms,
                        seq_in_stream=self._seq,
                        payload=self._cognition(t_ms),
                    )
                )
            )
            self._seq += 1
        return out

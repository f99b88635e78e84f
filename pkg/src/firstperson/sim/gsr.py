"""Simulated galvanic skin response at 1 Hz (configurable).

Baseline is a seeded random walk clamped to the physiological [1, 30] uS
range. Each gsr_event superimposes a skin-conductance-response bump: a 1 s
linear rise to the event amplitude followed by an exponential decay with a
4 s time constant.
"""

from __future__ import annotations

import math
from typing import Any

from ..model.streams import GsrPayload, SampleEnvelope, StreamId
from .base import Emission, driver_rng
from .scenario import ScenarioScript

CLAMP_LOW_US = 1.0
CLAMP_HIGH_US = 30.0
RISE_MS = 1000.0
DECAY_TAU_MS = 4000.0


def scr_bump(amplitude_us: float, dt_ms: float) -> float:
    """Closed-form skin conductance response at ``dt_ms`` after the event."""
    if dt_ms < 0:
        return 0.0
    if dt_ms < RISE_MS:
        return amplitude_us * (dt_ms / RISE_MS)
    return amplitude_us * math.exp(-(dt_ms - RISE_MS) / DECAY_TAU_MS)


class GsrDriver:
    streams = (StreamId.GSR,)

    def __init__(self, config: dict[str, Any], scenario: ScenarioScript) -> None:
        section = config["gsr"]
        self._rate = float(section["rate"])
        self._level = float(section["baseline_us"])
        self._step = float(section["walk_step_us"])
        self._duration_ms = scenario.duration_ms
        self._events = scenario.by_kind("gsr_event")
        self._rng = driver_rng(scenario.seed, StreamId.GSR)
        self._seq = 0

    def _t_ms(self, n: int) -> int:
        return int(n * 1000.0 / self._rate)

    def next_batch(self, now_ms: int) -> list[Emission]:
        out: list[Emission] = []
        while True:
            t_ms = self._t_ms(self._seq)
            if t_ms > now_ms or t_ms >= self._duration_ms:
                break
            if self._step > 0:
                self._level += float(self._rng.normal(0.0, self._step))
            self._level = min(max(self._level, CLAMP_LOW_US), CLAMP_HIGH_US)
            value = self._level
            for event in self._events:
                value += scr_bump(float(event.params["amplitude_us"]), t_ms - event.at_ms)
            value = min(max(value, CLAMP_LOW_US), CLAMP_HIGH_US)
            envelope = SampleEnvelope(
                stream=StreamId.GSR,
                t_ms=t_ms,
                seq_in_stream=self._seq,
                payload=GsrPayload(conductance_us=round(value, 4)),
            )
            out.append(Emission(envelope=envelope))
            self._seq += 1
        return out

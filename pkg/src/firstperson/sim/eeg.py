"""Simulated 14-channel EEG at a configurable rate (default 128 Hz).

Baseline is seeded pink-ish noise (AR(1)-filtered white noise, normalized to
the configured RMS). During an eeg_tone event a 10 uV sinusoid at the event
frequency is added on the listed channels. Byte sizes stay predictable by
rounding to three decimal places (sub-LSB for a real headset's ADC).
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from ..model.streams import EEG_CHANNELS, EegRawPayload, SampleEnvelope, StreamId
from .base import Emission, driver_rng
from .scenario import ScenarioScript

TONE_AMPLITUDE_UV = 10.0
_AR_COEFF = 0.95


class EegDriver:
    streams = (StreamId.EEG_RAW,)

    def __init__(self, config: dict[str, Any], scenario: ScenarioScript) -> None:
        self._rate = float(config["eeg"]["rate"])
        self._noise_uv = float(config["eeg"]["noise_uv"])
        self._duration_ms = scenario.duration_ms
        self._tones = scenario.by_kind("eeg_tone")
        self._rng = driver_rng(scenario.seed, StreamId.EEG_RAW)
        self._seq = 0
        # AR(1) carry-over so batch boundaries don't affect the waveform.
        self._ar_state = np.zeros(EEG_CHANNELS)
        # Normalize the AR(1) output back to unit RMS before scaling.
        self._ar_gain = math.sqrt(1.0 - _AR_COEFF * _AR_COEFF)

    def _t_ms(self, n: int) -> int:
        return int(n * 1000.0 / self._rate)

    def next_batch(self, now_ms: int) -> list[Emission]:
        out: list[Emission] = []
        count = 0
        n = self._seq
        while self._t_ms(n) <= now_ms and self._t_ms(n) < self._duration_ms:
            count += 1
            n += 1
        if count == 0:
            return out

        if self._noise_uv > 0:
            white = self._rng.standard_normal((count, EEG_CHANNELS))
            noise = np.empty_like(white)
            state = self._ar_state
            for i in range(count):
                state = _AR_COEFF * state + self._ar_gain * white[i]
                noise[i] = state
            self._ar_state = state
            noise = noise * self._noise_uv
        else:
            noise = np.zeros((count, EEG_CHANNELS))

        for i in range(count):
            n = self._seq + i
            t_ms = self._t_ms(n)
            t_s = n / self._rate
            values = noise[i].copy()
            for tone in self._tones:
                if tone.active_at(t_ms):
                    phase = 2.0 * math.pi * float(tone.params["freq_hz"]) * (t_s - tone.at_ms / 1000.0)
                    contribution = TONE_AMPLITUDE_UV * math.sin(phase)
                    for channel in tone.params["channels"]:
                        values[channel] += contribution
            channels = tuple(round(float(v), 3) for v in values)
            envelope = SampleEnvelope(
                stream=StreamId.EEG_RAW,
                t_ms=t_ms,
                seq_in_stream=n,
                payload=EegRawPayload(channels=channels),
            )
            out.append(Emission(envelope=envelope))
        self._seq += count
        return out

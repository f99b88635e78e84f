"""EEG band power: Hann-windowed periodogram over sliding 2 s windows.

Powers are integrated per band over theta [4,8), alpha [8,12), beta-L
[12,16), beta-H [16,25) and gamma [25,45) Hz by summing the one-sided PSD
bins whose center frequency falls in the band. Output cadence is one sample
per hop (default 0.5 s) once the first full window has been seen.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..model.streams import (
    BAND_NAMES,
    BandPowerPayload,
    ChannelBandPower,
    EEG_CHANNELS,
    SampleEnvelope,
    StreamId,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BandDefinition:
    """Contiguous, non-overlapping band edges in Hz, strictly below 64 Hz."""

    theta: tuple[float, float] = (4.0, 8.0)
    alpha: tuple[float, float] = (8.0, 12.0)
    beta_l: tuple[float, float] = (12.0, 16.0)
    beta_h: tuple[float, float] = (16.0, 25.0)
    gamma: tuple[float, float] = (25.0, 45.0)

    def __post_init__(self) -> None:
        edges = [self.theta, self.alpha, self.beta_l, self.beta_h, self.gamma]
        prev_hi = 0.0
        for name, (lo, hi) in zip(BAND_NAMES, edges):
            if lo >= hi:
                raise ValueError(f"band {name} has empty range")
            if prev_hi and lo != prev_hi:
                raise ValueError("bands must be contiguous")
            prev_hi = hi
        if edges[0][0] <= 0.0 or edges[-1][1] >= 64.0:
            raise ValueError("bands must lie within (0, 64) Hz")

    def items(self) -> list[tuple[str, tuple[float, float]]]:
        return [(name, getattr(self, name)) for name in BAND_NAMES]


DEFAULT_BANDS = BandDefinition()


def periodogram_psd(window: np.ndarray, fs: float) -> tuple[np.ndarray, np.ndarray]:
    """One-sided Hann periodogram PSD.

    ``window`` is (n_samples, n_channels); returns (freqs, psd) with psd of
    shape (n_bins, n_channels). Mean is removed per channel before
    windowing; scaling follows the standard density convention so that
    summing psd * df approximates signal power.
    """
    n = window.shape[0]
    x = window - window.mean(axis=0, keepdims=True)
    taper = np.hanning(n)
    xw = x * taper[:, None]
    spectrum = np.fft.rfft(xw, axis=0)
    scale = 1.0 / (fs * np.sum(taper**2))
    psd = (np.abs(spectrum) ** 2) * scale
    if n % 2 == 0:
        psd[1:-1] *= 2.0
    else:
        psd[1:] *= 2.0
    freqs = np.fft.rfftfreq(n, d=1.0 / fs)
    return freqs, psd


def band_power(window: np.ndarray, fs: float = 128.0, bands: BandDefinition = DEFAULT_BANDS) -> BandPowerPayload:
    """Band powers for one (n_samples, 14) window.

    Band power = sum of PSD bins with center frequency in [lo, hi), times the
    bin width, per channel.
    """
    window = np.asarray(window, dtype=float)
    if window.ndim != 2 or window.shape[1] != EEG_CHANNELS:
        raise ValueError(f"window must be (n, {EEG_CHANNELS}), got {window.shape}")
    freqs, psd = periodogram_psd(window, fs)
    df = freqs[1] - freqs[0]
    per_channel = []
    for ch in range(EEG_CHANNELS):
        values = {}
        for name, (lo, hi) in bands.items():
            mask = (freqs >= lo) & (freqs < hi)
            values[name] = float(psd[mask, ch].sum() * df)
        per_channel.append(ChannelBandPower(**values))
    return BandPowerPayload(per_channel=tuple(per_channel))


def total_power(window: np.ndarray, fs: float = 128.0, lo: float = 0.0, hi: float = 64.0) -> np.ndarray:
    """Per-channel periodogram power over (lo, hi) Hz, same scaling as band_power."""
    window = np.asarray(window, dtype=float)
    freqs, psd = periodogram_psd(window, fs)
    df = freqs[1] - freqs[0]
    mask = (freqs > lo) & (freqs < hi)
    return psd[mask].sum(axis=0) * df


def _round_sig(value: float, digits: int = 6) -> float:
    if value == 0.0:
        return 0.0
    return float(f"{value:.{digits}g}")


class BandPowerAnalyzer:
    """Streaming wrapper: consumes eeg-raw envelopes, emits eeg-bandpower.

    Keeps a rolling window of ``window_s`` seconds and produces one output
    per ``hop_s`` once warm. Non-finite input samples are rejected (the gap
    is logged) rather than poisoning the window.
    """

    def __init__(
        self,
        fs: float = 128.0,
        window_s: float = 2.0,
        hop_s: float = 0.5,
        bands: BandDefinition = DEFAULT_BANDS,
    ) -> None:
        self._fs = fs
        self._window_n = int(round(window_s * fs))
        self._hop_n = int(round(hop_s * fs))
        if self._window_n <= 0 or self._hop_n <= 0:
            raise ValueError("window and hop must be positive")
        self._bands = bands
        self._buffer: list[tuple[int, tuple[float, ...]]] = []
        self._since_last = 0
        self._warm = False
        self._out_seq = 0

    def process(self, envelope: SampleEnvelope) -> Iterator[SampleEnvelope]:
        if envelope.stream is not StreamId.EEG_RAW:
            return
        channels = envelope.payload.channels  # type: ignore[union-attr]
        if any(not math.isfinite(v) for v in channels):
            logger.warning("dropping eeg sample seq=%d: non-finite value", envelope.seq_in_stream)
            return
        self._buffer.append((envelope.t_ms, channels))
        if len(self._buffer) > self._window_n:
            self._buffer.pop(0)
        self._since_last += 1
        if len(self._buffer) < self._window_n:
            return
        if not self._warm or self._since_last >= self._hop_n:
            self._warm = True
            self._since_last = 0
            window = np.array([row for _, row in self._buffer], dtype=float)
            payload = band_power(window, fs=self._fs, bands=self._bands)
            rounded = BandPowerPayload(
                per_channel=tuple(
                    ChannelBandPower(**{name: _round_sig(getattr(cbp, name)) for name in BAND_NAMES})
                    for cbp in payload.per_channel
                )
            )
            yield SampleEnvelope(
                stream=StreamId.EEG_BANDPOWER,
                t_ms=envelope.t_ms,
                seq_in_stream=self._out_seq,
                payload=rounded,
            )
            self._out_seq += 1

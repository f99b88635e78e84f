"""Deterministic sensor simulators and the capture loop."""

from .audio import AudioDriver
from .base import ConfigurationError, Emission, SensorDriver, SIDECAR_MARKER
from .camera import CameraDriver, MediaBlob, pad_jpeg
from .eeg import EegDriver
from .gsr import GsrDriver, scr_bump
from .headset import HeadsetStateDriver
from .runner import RunReport, SinkError, build_drivers, run_drivers
from .scenario import (
    ScenarioError,
    ScenarioEvent,
    ScenarioScript,
    load_scenario,
    make_demo_scenario,
    parse_scenario,
)

__all__ = [
    "AudioDriver",
    "CameraDriver",
    "ConfigurationError",
    "EegDriver",
    "Emission",
    "GsrDriver",
    "HeadsetStateDriver",
    "MediaBlob",
    "RunReport",
    "SIDECAR_MARKER",
    "ScenarioError",
    "ScenarioEvent",
    "ScenarioScript",
    "SensorDriver",
    "SinkError",
    "build_drivers",
    "load_scenario",
    "make_demo_scenario",
    "pad_jpeg",
    "parse_scenario",
    "run_drivers",
    "scr_bump",
]

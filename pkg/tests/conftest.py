"""Shared fixtures: compact configs, scenario builders, acceptance reporting."""

from __future__ import annotations

import pytest

from firstperson.model.config import default_config
from firstperson.model.documents import ConsentRegistry
from firstperson.model.streams import StreamId
from firstperson.sim.scenario import ScenarioScript, parse_scenario

# One line per acceptance criterion, printed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, description: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    ACCEPTANCE_LINES.append(f"[criterion {number}] {status} - {description}{suffix}")


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


def small_config(**section_overrides) -> dict:
    """Default config shrunk for test speed: small frames, light byte targets."""
    config = default_config()
    config["image"].update({"width_px": 320, "height_px": 240})
    config["targets_kb_s"][StreamId.IMAGE_FRAME.value] = 30.0
    config["targets_kb_s"][StreamId.AUDIO_CHUNK.value] = 4.0
    for section, overrides in section_overrides.items():
        if isinstance(overrides, dict):
            config[section].update(overrides)
        else:
            config[section] = overrides
    return config


def scenario_from_events(events: list[dict], duration_ms: int = 10_000, seed: int = 0) -> ScenarioScript:
    return parse_scenario(
        {"seed": seed, "duration_ms": duration_ms, "events": sorted(events, key=lambda e: e["at_ms"])}
    )


@pytest.fixture()
def config() -> dict:
    return small_config()


@pytest.fixture()
def registry() -> ConsentRegistry:
    return ConsentRegistry()

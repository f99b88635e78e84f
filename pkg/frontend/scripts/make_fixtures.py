#!/usr/bin/env python3
"""Regenerate the UI test fixtures from the backend pipeline.

Produces, under frontend/tests/fixtures/:
  blurred-frame.jpg / blurred-frame.json   one persisted (redacted) frame and
                                           its envelope, from a real recording
                                           with a non-consented face
  raw-frame.jpg                            the same scene rendered by the
                                           camera driver, pre-redaction
  session-config.schema.json               the published config schema
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from firstperson.integrity import AttestationService
from firstperson.model.config import default_config
from firstperson.model.schemas import all_schemas
from firstperson.model.streams import StreamId
from firstperson.recorder import record_session
from firstperson.sim.camera import CameraDriver
from firstperson.sim.scenario import parse_scenario
from firstperson.store import SessionStore

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

FACE_BOX = {"x": 48, "y": 48, "w": 96, "h": 96}


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    config = default_config()
    config["image"].update({"width_px": 320, "height_px": 240})
    config["targets_kb_s"][StreamId.IMAGE_FRAME.value] = 30.0
    config["targets_kb_s"][StreamId.AUDIO_CHUNK.value] = 4.0
    config["eeg"]["enabled"] = False
    config["audio"]["enabled"] = False
    scenario = parse_scenario(
        {
            "seed": 7,
            "duration_ms": 2000,
            "events": [
                {"at_ms": 0, "kind": "face", "person_id": "stranger", "box": FACE_BOX, "span_ms": 2000}
            ],
        }
    )

    with tempfile.TemporaryDirectory() as tmp:
        store = SessionStore(Path(tmp) / "sessions")
        service = AttestationService(Path(tmp) / "attest")
        result = record_session(store, config, scenario, service)
        reader = store.open(result.session_id)
        frame = reader.query([StreamId.IMAGE_FRAME])[0]
        media = frame["payload"]["media"]
        data = reader.media_path(media["relative_path"]).read_bytes()
        (FIXTURES / "blurred-frame.jpg").write_bytes(data)
        (FIXTURES / "blurred-frame.json").write_text(json.dumps(frame, indent=2, sort_keys=True))

    raw = CameraDriver(config, scenario).next_batch(0)[0]
    (FIXTURES / "raw-frame.jpg").write_bytes(raw.media)

    schema = all_schemas()["session-config.schema.json"]
    (FIXTURES / "session-config.schema.json").write_text(json.dumps(schema, indent=2, sort_keys=True))
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    sys.exit(main())

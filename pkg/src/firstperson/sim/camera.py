"""Simulated chest camera: procedurally drawn frames at 1 fps.

Frames render the scenario's active face / scene_text / scene_object events
(faces as a high-frequency checkerboard so redaction is measurable), then
the JPEG is padded with APP1 filler segments to hit the configured per-frame
byte target exactly. Ground truth travels in the emission sidecar for the
mock analyzers; it is never part of the persisted payload.
"""

from __future__ import annotations

import hashlib
import io
import math
from typing import Any

from PIL import Image, ImageDraw

from ..model.streams import ImageFramePayload, MediaRef, Rect, SampleEnvelope, StreamId
from .base import ConfigurationError, Emission
from .scenario import ScenarioScript

JPEG_QUALITY = 85
BYTE_TOLERANCE = 0.20

_BG_PALETTE = [(38, 58, 84), (62, 88, 70), (96, 70, 54), (70, 62, 96), (84, 84, 52)]
_FACE_TONES = ((224, 172, 140), (96, 64, 48))


class MediaBlob:
    """Bytes plus the content-addressed path they will occupy."""

    __slots__ = ("data", "ref")

    def __init__(self, data: bytes, ext: str) -> None:
        digest = hashlib.sha256(data).hexdigest()
        self.data = data
        self.ref = MediaRef(
            relative_path=f"media/{digest[:2]}/{digest}.{ext}",
            content_hash=digest,
            byte_len=len(data),
        )


def pad_jpeg(data: bytes, target_len: int) -> bytes:
    """Grow a JPEG to ``target_len`` bytes with APP1 filler segments.

    Filler is inserted right after SOI so the file stays a decodable JPEG.
    A shortfall under 4 bytes is left as-is (below any segment's overhead).
    """
    need = target_len - len(data)
    if need < 4:
        return data
    if data[:2] != b"\xff\xd8":
        raise ValueError("not a JPEG stream")
    max_data = 65533
    seg_count = math.ceil(need / (max_data + 4))
    payload_total = need - 4 * seg_count
    base, extra = divmod(payload_total, seg_count)
    chunks = []
    for i in range(seg_count):
        size = base + (1 if i < extra else 0)
        chunks.append(b"\xff\xe1" + (size + 2).to_bytes(2, "big") + b"\x00" * size)
    return data[:2] + b"".join(chunks) + data[2:]


def clip_box(box: Rect, width: int, height: int) -> Rect | None:
    x0 = max(box.x, 0)
    y0 = max(box.y, 0)
    x1 = min(box.x + box.w, width)
    y1 = min(box.y + box.h, height)
    if x1 - x0 <= 0 or y1 - y0 <= 0:
        return None
    return Rect(x=x0, y=y0, w=x1 - x0, h=y1 - y0)


def draw_face(draw: ImageDraw.ImageDraw, box: Rect) -> None:
    # 8 px checkerboard: high spatial frequency that pixelation must destroy.
    cell = 8
    for yy in range(box.y, box.y + box.h, cell):
        for xx in range(box.x, box.x + box.w, cell):
            tone = _FACE_TONES[((xx - box.x) // cell + (yy - box.y) // cell) % 2]
            draw.rectangle([xx, yy, min(xx + cell, box.x + box.w) - 1, min(yy + cell, box.y + box.h) - 1], fill=tone)
    draw.ellipse([box.x, box.y, box.x + box.w - 1, box.y + box.h - 1], outline=(20, 20, 20), width=2)


class CameraDriver:
    streams = (StreamId.IMAGE_FRAME,)

    def __init__(self, config: dict[str, Any], scenario: ScenarioScript) -> None:
        image = config["image"]
        self._rate = float(image["rate"])
        self._width = int(image["width_px"])
        self._height = int(image["height_px"])
        self._duration_ms = scenario.duration_ms
        self._scenario = scenario
        self._seq = 0
        target_kb_s = float(config["targets_kb_s"][StreamId.IMAGE_FRAME.value])
        self._target_bytes = int(round(target_kb_s * 1000.0 / self._rate))
        # Fail fast on hopeless targets; per-frame encodes are checked too.
        probe = self._encode(self._render(0, 0))
        if len(probe) > self._target_bytes * (1 + BYTE_TOLERANCE):
            raise ConfigurationError(
                f"image byte target {self._target_bytes} B/frame unreachable: "
                f"a bare {self._width}x{self._height} frame encodes to {len(probe)} B"
            )

    def _t_ms(self, n: int) -> int:
        return int(n * 1000.0 / self._rate)

    def _render(self, seq: int, t_ms: int) -> Image.Image:
        img = Image.new("RGB", (self._width, self._height), _BG_PALETTE[seq % len(_BG_PALETTE)])
        draw = ImageDraw.Draw(img)
        draw.text((8, 8), f"frame {seq} t={t_ms}ms", fill=(230, 230, 230))
        for event in self._scenario.active("scene_text", t_ms):
            box = clip_box(Rect.from_jsonable(event.params["box"]), self._width, self._height)
            if box is None:
                continue
            draw.rectangle([box.x, box.y, box.x + box.w - 1, box.y + box.h - 1], fill=(240, 240, 240))
            draw.text((box.x + 4, box.y + box.h // 2 - 5), str(event.params["value"]), fill=(10, 10, 10))
        for event in self._scenario.active("scene_object", t_ms):
            box = clip_box(Rect.from_jsonable(event.params["box"]), self._width, self._height)
            if box is None:
                continue
            draw.rectangle([box.x, box.y, box.x + box.w - 1, box.y + box.h - 1], outline=(250, 220, 90), width=3)
            draw.text((box.x + 4, box.y + 4), str(event.params["label"]), fill=(250, 220, 90))
        for event in self._scenario.active("face", t_ms):
            box = clip_box(Rect.from_jsonable(event.params["box"]), self._width, self._height)
            if box is None:
                continue
            draw_face(draw, box)
        return img

    def _encode(self, img: Image.Image) -> bytes:
        buf = io.BytesIO()
        img.save(buf, format="JPEG", quality=JPEG_QUALITY)
        return buf.getvalue()

    def _ground_truth(self, t_ms: int) -> dict[str, Any]:
        faces = []
        for event in self._scenario.active("face", t_ms):
            box = clip_box(Rect.from_jsonable(event.params["box"]), self._width, self._height)
            if box is not None:
                faces.append({"person_id": event.params["person_id"], "box": box.to_jsonable()})
        texts = []
        for event in self._scenario.active("scene_text", t_ms):
            box = clip_box(Rect.from_jsonable(event.params["box"]), self._width, self._height)
            if box is not None:
                texts.append({"value": event.params["value"], "box": box.to_jsonable()})
        objects = []
        for event in self._scenario.active("scene_object", t_ms):
            box = clip_box(Rect.from_jsonable(event.params["box"]), self._width, self._height)
            if box is not None:
                objects.append({"label": event.params["label"], "box": box.to_jsonable()})
        return {"faces": faces, "texts": texts, "objects": objects}

    def next_batch(self, now_ms: int) -> list[Emission]:
        out: list[Emission] = []
        while True:
            t_ms = self._t_ms(self._seq)
            if t_ms > now_ms or t_ms >= self._duration_ms:
                break
            encoded = self._encode(self._render(self._seq, t_ms))
            if len(encoded) > self._target_bytes * (1 + BYTE_TOLERANCE):
                raise ConfigurationError(
                    f"frame {self._seq} encodes to {len(encoded)} B, beyond the "
                    f"{self._target_bytes} B target (+{int(BYTE_TOLERANCE * 100)}%)"
                )
            blob = MediaBlob(pad_jpeg(encoded, self._target_bytes), "jpg")
            payload = ImageFramePayload(
                media=blob.ref,
                width_px=self._width,
                height_px=self._height,
                blurred_regions=(),
            )
            envelope = SampleEnvelope(
                stream=StreamId.IMAGE_FRAME, t_ms=t_ms, seq_in_stream=self._seq, payload=payload
            )
            out.append(
                Emission(envelope=envelope, sidecar={"ground_truth": self._ground_truth(t_ms)}, media=blob.data)
            )
            self._seq += 1
        return out

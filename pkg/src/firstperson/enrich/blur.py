"""Consent-aware face redaction, applied before anything is persisted.

Every detected face is redacted unless the consent registry holds a record
for the matched person whose scope is global or explicitly grants this
recording subject. Redaction uncertainty always errs toward more redaction:
unknown faces are blurred, and a detector failure quarantines the whole
frame instead of persisting it.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

from PIL import Image

from ..model.documents import ConsentRegistry
from ..model.streams import ImageFramePayload, Rect
from .clients import AnalyzerError, FaceDetectClient, FaceDetection


class FrameQuarantined(Exception):
    """Detection failed; the frame must not be persisted or served."""

    def __init__(self, seq: int, reason: str) -> None:
        super().__init__(f"frame seq {seq} quarantined: {reason}")
        self.seq = seq
        self.reason = reason


@dataclass(frozen=True)
class RedactedFrame:
    payload: ImageFramePayload  # blurred_regions filled in
    data: bytes  # re-encoded image bytes, redaction applied


def pixelate_region(img: Image.Image, box: Rect, cell_px: int = 16) -> None:
    """In-place mosaic: the box is downsampled to cell_px blocks and scaled back."""
    region = img.crop((box.x, box.y, box.x + box.w, box.y + box.h))
    cells_w = max(1, box.w // cell_px)
    cells_h = max(1, box.h // cell_px)
    small = region.resize((cells_w, cells_h), Image.BILINEAR)
    img.paste(small.resize((box.w, box.h), Image.NEAREST), (box.x, box.y))


def fill_region(img: Image.Image, box: Rect) -> None:
    img.paste((0, 0, 0), (box.x, box.y, box.x + box.w, box.y + box.h))


def redact(
    image_bytes: bytes,
    detections: list[FaceDetection],
    registry: ConsentRegistry,
    subject_id: str,
    mode: str = "pixelate",
    cell_px: int = 16,
    jpeg_quality: int = 85,
) -> tuple[bytes, list[Rect]]:
    """Apply redaction for every non-consented detection; returns new bytes
    plus the list of boxes actually redacted."""
    to_blur = [d.box for d in detections if not registry.may_record_unblurred(d.person_id, subject_id)]
    if not to_blur:
        return image_bytes, []
    img = Image.open(io.BytesIO(image_bytes)).convert("RGB")
    for box in to_blur:
        if mode == "solid":
            fill_region(img, box)
        else:
            pixelate_region(img, box, cell_px)
    buf = io.BytesIO()
    img.save(buf, format="JPEG", quality=jpeg_quality)
    return buf.getvalue(), to_blur


def blur_frame(
    payload: ImageFramePayload,
    image_bytes: bytes,
    client: FaceDetectClient,
    sidecar: dict | None,
    registry: ConsentRegistry,
    subject_id: str,
    mode: str = "pixelate",
    cell_px: int = 16,
    target_bytes: int | None = None,
) -> RedactedFrame:
    """Detect, decide consent, redact, and re-pad to the frame byte target.

    Raises FrameQuarantined if detection fails: with no trustworthy face
    list the frame cannot be proven safe, so it is dropped entirely.
    """
    from ..sim.camera import MediaBlob, pad_jpeg

    try:
        detections = client.detect_faces(sidecar)
    except AnalyzerError as exc:
        raise FrameQuarantined(seq=-1, reason=str(exc)) from exc

    for detection in detections:
        box = detection.box
        if box.x + box.w > payload.width_px or box.y + box.h > payload.height_px:
            raise FrameQuarantined(seq=-1, reason=f"detection box {box} outside frame bounds")

    data, blurred = redact(image_bytes, detections, registry, subject_id, mode=mode, cell_px=cell_px)
    if blurred and target_bytes is not None:
        data = pad_jpeg(data, target_bytes)
    blob = MediaBlob(data, "jpg")
    new_payload = ImageFramePayload(
        media=blob.ref,
        width_px=payload.width_px,
        height_px=payload.height_px,
        blurred_regions=tuple(blurred),
    )
    return RedactedFrame(payload=new_payload, data=blob.data)

/** Pixel-level redaction checks.
 *
 * A pixelated (mosaic) region has almost no high-frequency content: adjacent
 * pixels inside a mosaic cell are near-identical, so the mean absolute
 * horizontal luma delta collapses versus natural image content. The test
 * suite runs these checks on fixture frames; the timeline view uses them to
 * badge frames whose declared blurred regions look untouched.
 */

import type { Rect } from "./types.js";

export interface Rgba {
  data: Uint8Array | Uint8ClampedArray;
  width: number;
  height: number;
}

function luma(image: Rgba, x: number, y: number): number {
  const i = (y * image.width + x) * 4;
  const d = image.data;
  return 0.299 * d[i]! + 0.587 * d[i + 1]! + 0.114 * d[i + 2]!;
}

/** Mean absolute horizontal luma difference inside a region. */
export function highFrequencyEnergy(image: Rgba, box: Rect): number {
  let total = 0;
  let count = 0;
  const x1 = Math.min(box.x + box.w, image.width);
  const y1 = Math.min(box.y + box.h, image.height);
  for (let y = box.y; y < y1; y++) {
    for (let x = box.x; x < x1 - 1; x++) {
      total += Math.abs(luma(image, x + 1, y) - luma(image, x, y));
      count += 1;
    }
  }
  return count ? total / count : 0;
}

/** Does the region look mosaicked relative to a reference energy level?
 * ``referenceEnergy`` should come from comparable unredacted content; the
 * default threshold matches the backend's 16 px mosaic after JPEG. */
export function regionLooksRedacted(
  image: Rgba,
  box: Rect,
  referenceEnergy: number,
  ratio = 0.25,
): boolean {
  return highFrequencyEnergy(image, box) < referenceEnergy * ratio;
}

/** Every declared blurred region must look redacted. */
export function frameRedactionOk(
  image: Rgba,
  blurredRegions: Rect[],
  referenceEnergy: number,
  ratio = 0.25,
): boolean {
  return blurredRegions.every((box) => regionLooksRedacted(image, box, referenceEnergy, ratio));
}

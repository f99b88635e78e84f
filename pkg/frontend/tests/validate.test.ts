/** The client-side schema checker against the published config schema. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { validateAgainstSchema } from "../src/validate.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
const schema = JSON.parse(readFileSync(join(FIXTURES, "session-config.schema.json"), "utf-8"));

function validConfig(): Record<string, unknown> {
  return {
    schema_version: "1.0.0",
    subject_id: "anon-subject",
    eeg: { enabled: true, rate: 128.0, noise_uv: 18.0 },
    gsr: { enabled: true, rate: 1.0, baseline_us: 5.0, walk_step_us: 0.05 },
    image: { enabled: true, rate: 1.0, width_px: 640, height_px: 480 },
    audio: { enabled: true, chunk_s: 10.0 },
    headset: { enabled: true, rate: 2.0 },
    bandpower: { enabled: true, window_s: 2.0, hop_s: 0.5 },
    analysis: { transcribe: true, sentiment: true, image_text: true, image_labels: true },
    targets_kb_s: {
      "eeg-raw": 30.0,
      "audio-chunk": 20.0,
      "image-frame": 600.0,
      gsr: 0.01,
      "eeg-bandpower": 8.0,
      "facial-expression": 4.0,
      cognition: 0.02,
      "audio-text": 0.003,
      "speech-sentiment": 0.002,
      "des-report": 0.001,
      "image-text": 0.001,
      "image-labels": 2.0,
    },
    rotation: { max_bytes: 16_000_000, max_duration_s: 60.0 },
    des: { start_phrase: "start ziggy", end_phrase: "end ziggy" },
    blur: { mode: "pixelate", cell_px: 16 },
  };
}

describe("config schema validation (client side)", () => {
  it("accepts the default config", () => {
    expect(validateAgainstSchema(validConfig(), schema)).toEqual([]);
  });

  it("flags a negative image rate at its path", () => {
    const config = validConfig();
    (config["image"] as Record<string, unknown>)["rate"] = -1;
    const issues = validateAgainstSchema(config, schema);
    expect(issues.some((i) => i.path === "$.image.rate")).toBe(true);
  });

  it("flags a missing required field", () => {
    const config = validConfig();
    delete config["subject_id"];
    const issues = validateAgainstSchema(config, schema);
    expect(issues.some((i) => i.path === "$.subject_id" && i.message === "required")).toBe(true);
  });

  it("flags unknown fields when additionalProperties is false", () => {
    const config = validConfig();
    config["surprise"] = 1;
    const issues = validateAgainstSchema(config, schema);
    expect(issues.some((i) => i.path === "$.surprise")).toBe(true);
  });

  it("flags a bad enum value", () => {
    const config = validConfig();
    (config["blur"] as Record<string, unknown>)["mode"] = "off";
    const issues = validateAgainstSchema(config, schema);
    expect(issues.some((i) => i.path === "$.blur.mode")).toBe(true);
  });
});

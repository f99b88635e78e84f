/** Playback timeline logic: windowed range queries and per-stream tracks.
 * Pure data transforms; the view layer renders the result. */

import type { ApiClient, SampleQuery } from "./api.js";
import type { Envelope, Rect } from "./types.js";

export interface DesMarker {
  t_ms: number;
  text: string;
  terminated: boolean;
  start_ms: number;
  end_ms: number;
}

export interface TranscriptEntry {
  t_ms: number;
  speaker: "wearer" | "other";
  text: string;
}

export interface FrameEntry {
  t_ms: number;
  seq: number;
  media: { relative_path: string };
  blurred_regions: Rect[];
}

export interface SeriesPoint {
  t_ms: number;
  value: number;
}

export interface Tracks {
  frames: FrameEntry[];
  des: DesMarker[];
  transcripts: TranscriptEntry[];
  gsr: SeriesPoint[];
  cognition: Record<string, SeriesPoint[]>;
  counts: Record<string, number>;
}

export const TIMELINE_STREAMS = [
  "image-frame",
  "des-report",
  "audio-text",
  "gsr",
  "cognition",
] as const;

export function emptyTracks(): Tracks {
  return { frames: [], des: [], transcripts: [], gsr: [], cognition: {}, counts: {} };
}

/** Fold a page of envelopes into render-ready tracks. */
export function buildTracks(samples: Envelope[]): Tracks {
  const tracks = emptyTracks();
  for (const envelope of samples) {
    tracks.counts[envelope.stream] = (tracks.counts[envelope.stream] ?? 0) + 1;
    const payload = envelope.payload as Record<string, any>;
    switch (envelope.stream) {
      case "image-frame":
        tracks.frames.push({
          t_ms: envelope.t_ms,
          seq: envelope.seq_in_stream,
          media: payload["media"],
          blurred_regions: payload["blurred_regions"] ?? [],
        });
        break;
      case "des-report":
        tracks.des.push({
          t_ms: envelope.t_ms,
          text: String(payload["text"]),
          terminated: Boolean(payload["terminated"]),
          start_ms: payload["span"]?.start_ms ?? envelope.t_ms,
          end_ms: payload["span"]?.end_ms ?? envelope.t_ms,
        });
        break;
      case "audio-text":
        tracks.transcripts.push({
          t_ms: envelope.t_ms,
          speaker: payload["speaker"] === "wearer" ? "wearer" : "other",
          text: String(payload["text"]),
        });
        break;
      case "gsr":
        tracks.gsr.push({ t_ms: envelope.t_ms, value: Number(payload["conductance_us"]) });
        break;
      case "cognition":
        for (const key of Object.keys(payload)) {
          (tracks.cognition[key] ??= []).push({ t_ms: envelope.t_ms, value: Number(payload[key]) });
        }
        break;
      default:
        break;
    }
  }
  return tracks;
}

/** One scrubbable window over a session; fetches are windowed so very long
 * sessions never load wholesale. */
export class TimelineController {
  window: { from_ms: number; to_ms: number };
  tracks: Tracks = emptyTracks();
  loading = false;

  constructor(
    private api: ApiClient,
    public sessionId: string,
    public durationMs: number,
    public windowMs = 30_000,
    private pageLimit = 2000,
  ) {
    this.window = { from_ms: 0, to_ms: Math.min(windowMs, durationMs) };
  }

  /** The sample query a scrub to [fromMs, toMs) issues. */
  queryFor(fromMs: number, toMs: number): SampleQuery {
    return {
      streams: [...TIMELINE_STREAMS],
      from_ms: fromMs,
      to_ms: toMs,
      limit: this.pageLimit,
    };
  }

  async scrubTo(fromMs: number, toMs?: number): Promise<Tracks> {
    const from = Math.max(0, Math.min(fromMs, this.durationMs));
    const to = Math.min(toMs ?? from + this.windowMs, this.durationMs);
    this.window = { from_ms: from, to_ms: to };
    this.loading = true;
    try {
      const samples: Envelope[] = [];
      let cursor: string | undefined;
      do {
        const page = await this.api.samples(this.sessionId, {
          ...this.queryFor(from, to),
          cursor,
        });
        samples.push(...page.samples);
        cursor = page.next_cursor ?? undefined;
      } while (cursor);
      this.tracks = buildTracks(samples);
      return this.tracks;
    } finally {
      this.loading = false;
    }
  }
}

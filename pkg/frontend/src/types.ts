/** Mirrors of the control-api response shapes the UI consumes. */

export type StreamId =
  | "eeg-raw"
  | "audio-chunk"
  | "image-frame"
  | "gsr"
  | "eeg-bandpower"
  | "facial-expression"
  | "cognition"
  | "audio-text"
  | "speech-sentiment"
  | "des-report"
  | "image-text"
  | "image-labels";

export const COGNITION_KEYS = [
  "engagement",
  "excitement",
  "stress",
  "relaxation",
  "interest",
  "focus",
] as const;
export type CognitionKey = (typeof COGNITION_KEYS)[number];

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface MediaRef {
  relative_path: string;
  content_hash: string;
  byte_len: number;
}

export interface Envelope {
  stream: StreamId;
  t_ms: number;
  seq_in_stream: number;
  // Payload shape depends on the stream; the UI only reads fields it renders.
  payload: Record<string, unknown>;
}

export interface SegmentSummary {
  seq: number;
  file_path: string;
  byte_len: number;
  attested: boolean;
}

export interface SessionSummary {
  session_id: string;
  subject_id: string;
  started_at: string;
  status: "open" | "closed" | "incomplete";
  duration_ms: number;
  segment_count: number;
  attested_count: number;
  quarantined_count: number;
  unanalyzed_count: number;
  scenario_seed: number;
  segments: SegmentSummary[];
}

export interface SamplesPage {
  samples: Envelope[];
  next_cursor: string | null;
}

export interface VerifyResponse {
  kind: "valid" | "tampered" | "gap";
  seq: number | null;
  detail: string;
  verdict: string;
}

export interface ConsentRecord {
  person_id: string;
  face_signature: string;
  scope_global: boolean;
  granted_to: string[];
}

export interface RateReport {
  session_id: string;
  duration_ms: number;
  per_stream: Record<string, { bytes: number; kb_s: number; target_kb_s: number }>;
  total_bytes: number;
  total_kb_s: number;
  extrapolated_full_day_gb: number;
  extrapolated_text_day_gb: number;
  measured_full_day_gb: number;
  measured_text_day_gb: number;
}

export type LiveMessage =
  | { type: "sample"; envelope: Envelope }
  | { type: "drops"; count: number }
  | { type: "closed"; dropped: number };

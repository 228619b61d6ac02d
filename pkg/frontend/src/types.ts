/** Wire types for the four service endpoints the playground talks to. */

export interface EditSpan {
  /** Code-point offsets into the ORIGINAL input, end exclusive. */
  start: number;
  end: number;
  replacement: string;
  pass: string;
}

export interface NormalizeResponse {
  normalized: string;
  edits: EditSpan[];
}

export interface AttackResponse {
  attacked: string;
  params_used: Record<string, unknown>;
  seed_used: number;
}

export type Score = number | number[];

export interface NormalizedBlock {
  text: string;
  label: string;
  score: Score;
}

/** One stored attempt, exactly as the service persists it. */
export interface AttemptRecord {
  seq: number;
  session_id: string;
  input: string;
  label: string;
  score: Score;
  normalized_text: string | null;
  normalized_label: string | null;
  normalized_score: Score | null;
  meta: Record<string, unknown> | null;
  timestamp: string;
}

export interface ScoreResponse {
  label: string;
  score: Score;
  normalized: NormalizedBlock | null;
  attempt?: AttemptRecord;
}

export interface HealthResponse {
  status: string;
  version: string;
  tables_loaded: number;
}

export const ATTACK_KINDS = [
  "insert_punctuation_chars",
  "insert_whitespace_chars",
  "insert_zero_width_chars",
  "merge_words",
  "replace_fun_fonts",
  "replace_similar_chars",
  "replace_similar_unicode_chars",
  "simulate_typos",
  "split_words",
] as const;

export type AttackKind = (typeof ATTACK_KINDS)[number];

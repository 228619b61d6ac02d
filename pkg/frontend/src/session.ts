/** Client-side attempt log: verdicts, JSONL export byte-compatible with
 * the service's own session log, and lossless re-import. */

import { PyFloat, canonicalJson, type Canonical } from "./canonical.js";
import type { AttemptRecord, Score } from "./types.js";

export type Verdict = "defeated" | "bypassed";

/** An attack is bypassed exactly when the post-normalization label
 * disagrees with the clean reference label for the same sentence. */
export function computeVerdict(referenceLabel: string, normalizedLabel: string | null): Verdict {
  return normalizedLabel === referenceLabel ? "defeated" : "bypassed";
}

const REQUIRED_KEYS = [
  "seq",
  "session_id",
  "input",
  "label",
  "score",
  "normalized_text",
  "normalized_label",
  "normalized_score",
  "meta",
  "timestamp",
] as const;

function scoreToCanonical(score: Score | null): Canonical {
  if (score === null) {
    return null;
  }
  if (Array.isArray(score)) {
    return score.map((v) => new PyFloat(v));
  }
  return new PyFloat(score);
}

/** Meta is written by this client with strings and integers only, so its
 * numbers serialize identically on both sides. */
function metaToCanonical(meta: Record<string, unknown> | null): Canonical {
  return (meta ?? null) as Canonical;
}

export function attemptToCanonical(record: AttemptRecord): Canonical {
  return {
    seq: record.seq,
    session_id: record.session_id,
    input: record.input,
    label: record.label,
    score: scoreToCanonical(record.score),
    normalized_text: record.normalized_text,
    normalized_label: record.normalized_label,
    normalized_score: scoreToCanonical(record.normalized_score),
    meta: metaToCanonical(record.meta),
    timestamp: record.timestamp,
  };
}

export function attemptLine(record: AttemptRecord): string {
  return canonicalJson(attemptToCanonical(record));
}

interface Entry {
  record: AttemptRecord;
  /** Exact serialized bytes: computed for live attempts, preserved
   * verbatim for imported ones so export(import(x)) === x. */
  rawLine: string;
}

export class SessionLog {
  private entries: Entry[] = [];

  get size(): number {
    return this.entries.length;
  }

  get records(): readonly AttemptRecord[] {
    return this.entries.map((e) => e.record);
  }

  get canExport(): boolean {
    return this.entries.length > 0;
  }

  addLive(record: AttemptRecord): void {
    this.entries.push({ record, rawLine: attemptLine(record) });
  }

  clear(): void {
    this.entries = [];
  }

  exportJsonl(): string {
    return this.entries.map((e) => e.rawLine + "\n").join("");
  }

  /** Replace the log with the parsed file contents; throws with a line
   * number on schema violations. */
  importJsonl(text: string): void {
    const entries: Entry[] = [];
    const lines = text.split("\n");
    lines.forEach((line, index) => {
      if (line === "") {
        return;
      }
      let parsed: unknown;
      try {
        parsed = JSON.parse(line);
      } catch {
        throw new Error(`line ${index + 1}: not valid JSON`);
      }
      if (parsed === null || typeof parsed !== "object" || Array.isArray(parsed)) {
        throw new Error(`line ${index + 1}: not a JSON object`);
      }
      const record = parsed as Record<string, unknown>;
      for (const key of REQUIRED_KEYS) {
        if (!(key in record)) {
          throw new Error(`line ${index + 1}: missing field "${key}"`);
        }
      }
      entries.push({ record: record as unknown as AttemptRecord, rawLine: line });
    });
    this.entries = entries;
  }

  /** Tally verdicts the same way the table renders them, reading the
   * reference label back out of each record's meta. */
  verdictCounts(): { defeated: number; bypassed: number; unknown: number } {
    const counts = { defeated: 0, bypassed: 0, unknown: 0 };
    for (const { record } of this.entries) {
      counts[verdictFor(record) ?? "unknown"] += 1;
    }
    return counts;
  }
}

/** null when the record carries no reference label (foreign imports);
 * this client always stores one in meta.reference_label. */
export function verdictFor(record: AttemptRecord): Verdict | null {
  if (record.meta === null || typeof record.meta.reference_label !== "string") {
    return null;
  }
  return computeVerdict(record.meta.reference_label, record.normalized_label);
}

import { describe, expect, it } from "vitest";

import { SessionLog, attemptLine, computeVerdict, verdictFor } from "../src/session.js";
import type { AttemptRecord } from "../src/types.js";

function makeAttempt(seq: number, overrides: Partial<AttemptRecord> = {}): AttemptRecord {
  return {
    seq,
    session_id: "s1",
    input: `attempt ${seq}`,
    label: "negative",
    score: 0.0,
    normalized_text: `attempt ${seq}`,
    normalized_label: "positive",
    normalized_score: 0.5,
    meta: { reference_label: "positive" },
    timestamp: "2026-08-25T12:00:00+00:00",
    ...overrides,
  };
}

describe("computeVerdict", () => {
  it("defeated when normalization restores the reference class", () => {
    expect(computeVerdict("positive", "positive")).toBe("defeated");
  });

  it("bypassed when the attack survives normalization", () => {
    expect(computeVerdict("positive", "negative")).toBe("bypassed");
    expect(computeVerdict("positive", null)).toBe("bypassed");
  });

  it("verdictFor reads the reference out of meta", () => {
    expect(verdictFor(makeAttempt(0))).toBe("defeated");
    expect(verdictFor(makeAttempt(0, { normalized_label: "negative" }))).toBe("bypassed");
    expect(verdictFor(makeAttempt(0, { meta: null }))).toBeNull();
  });
});

describe("SessionLog", () => {
  it("exports one canonical line per attempt", () => {
    const log = new SessionLog();
    expect(log.canExport).toBe(false);
    log.addLive(makeAttempt(0));
    log.addLive(makeAttempt(1));
    log.addLive(makeAttempt(2));
    expect(log.canExport).toBe(true);
    const lines = log.exportJsonl().split("\n");
    expect(lines.length).toBe(4); // three records plus the trailing newline
    expect(lines[3]).toBe("");
    expect(lines[0]).toBe(attemptLine(makeAttempt(0)));
    expect(JSON.parse(lines[1] as string).seq).toBe(1);
  });

  it("serializes integral float scores the way the service does", () => {
    const line = attemptLine(makeAttempt(0, { score: 0.0, normalized_score: 1.0 }));
    expect(line).toContain('"score":0.0');
    expect(line).toContain('"normalized_score":1.0');
    expect(line).toContain('"seq":0,');
  });

  it("round-trips export -> import -> export byte for byte", () => {
    const log = new SessionLog();
    log.addLive(makeAttempt(0, { input: "zero​width Ｔ attempt" }));
    log.addLive(makeAttempt(1, { normalized_label: "negative", normalized_score: 0.0 }));
    const exported = log.exportJsonl();

    const imported = new SessionLog();
    imported.importJsonl(exported);
    expect(imported.size).toBe(2);
    expect(imported.exportJsonl()).toBe(exported);
    expect(imported.records[0]!.input).toBe("zero​width Ｔ attempt");
  });

  it("import preserves foreign bytes it could not regenerate", () => {
    // 2.0 parses to a plain integer in JS; only raw-line retention can
    // reproduce these bytes on re-export.
    const foreign =
      '{"input":"x","label":"negative","meta":{"weight":2.0},"normalized_label":null,' +
      '"normalized_score":null,"normalized_text":null,"score":0.0,"seq":0,' +
      '"session_id":"ext","timestamp":"2026-01-01T00:00:00+00:00"}\n';
    const log = new SessionLog();
    log.importJsonl(foreign);
    expect(log.exportJsonl()).toBe(foreign);
  });

  it("rejects malformed imports with a line number", () => {
    const log = new SessionLog();
    expect(() => log.importJsonl('{"seq": 0}\nnot json\n')).toThrow(/line 1: missing field/);
    expect(() => log.importJsonl(attemptLine(makeAttempt(0)) + "\nnot json\n")).toThrow(
      /line 2: not valid JSON/,
    );
    expect(() => log.importJsonl("[1, 2]\n")).toThrow(/line 1: not a JSON object/);
  });

  it("verdict counts match the exported rows", () => {
    const log = new SessionLog();
    log.addLive(makeAttempt(0)); // defeated
    log.addLive(makeAttempt(1, { normalized_label: "negative" })); // bypassed
    log.addLive(makeAttempt(2)); // defeated
    log.addLive(makeAttempt(3, { meta: null })); // unknown
    expect(log.verdictCounts()).toEqual({ defeated: 2, bypassed: 1, unknown: 1 });

    const reimported = new SessionLog();
    reimported.importJsonl(log.exportJsonl());
    expect(reimported.verdictCounts()).toEqual(log.verdictCounts());
  });
});

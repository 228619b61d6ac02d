/** End-to-end fidelity against a real service process.
 *
 * Spawns `python3 -m atnorm serve`, then drives it through the same
 * ApiClient/render/session modules the page uses. Asserts the acceptance
 * behaviors: every golden attacked string normalizes to its golden clean
 * string, the diff pane highlights exactly the service-reported spans,
 * zero-width characters render as visible placeholders, and a session
 * export is byte-identical to the service's own JSONL log and re-imports
 * losslessly.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { spawn, type ChildProcess } from "node:child_process";
import { mkdtemp, readFile, rm } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { ApiClient } from "../src/api.js";
import { diffHtml, escapeHtml, textHtml } from "../src/render.js";
import { SessionLog, verdictFor } from "../src/session.js";
import { ATTACK_KINDS } from "../src/types.js";
import type { AttemptRecord, EditSpan, NormalizeResponse } from "../src/types.js";
import { GOLDEN_PAIRS, ZERO_WIDTH_ROW } from "./fixtures/golden.js";

const PORT = 20000 + Math.floor(Math.random() * 20000);
const BASE = `http://127.0.0.1:${PORT}`;

let child: ChildProcess;
let childStderr = "";
let workDir: string;
let sessionLogPath: string;
const client = new ApiClient(BASE);

async function waitForHealth(deadlineMs: number): Promise<void> {
  const deadline = Date.now() + deadlineMs;
  for (;;) {
    const res = await client.health();
    if (res.kind === "ok" && res.data.status === "ok") {
      return;
    }
    if (Date.now() > deadline) {
      throw new Error(
        `service not healthy after ${deadlineMs}ms: ${JSON.stringify(res)}\n${childStderr}`,
      );
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
}

async function normalizeOk(text: string): Promise<NormalizeResponse> {
  const res = await client.normalize(text);
  if (res.kind !== "ok") {
    throw new Error(`normalize failed: ${JSON.stringify(res)}`);
  }
  return res.data;
}

beforeAll(async () => {
  workDir = await mkdtemp(join(tmpdir(), "fidelity-"));
  sessionLogPath = join(workDir, "sessions.jsonl");
  child = spawn(
    "python3",
    ["-m", "atnorm", "serve", "--port", String(PORT), "--session-log", sessionLogPath],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  child.stderr?.on("data", (chunk: Buffer) => {
    childStderr += chunk.toString();
  });
  await waitForHealth(20000);
}, 30000);

afterAll(async () => {
  if (child && child.exitCode === null) {
    const exited = new Promise((resolve) => child.once("exit", resolve));
    child.kill("SIGTERM");
    await exited;
  }
  await rm(workDir, { recursive: true, force: true });
});

/** Inner HTML of each <mark> in document order. Mark bodies never contain
 * a closing </mark>, so a non-greedy scan is exact. */
function markBodies(html: string): { pass: string; inner: string }[] {
  return [...html.matchAll(/<mark class="edit" data-pass="([^"]*)"[^>]*>(.*?)<\/mark>/g)].map(
    (m) => ({ pass: m[1]!, inner: m[2]! }),
  );
}

describe("golden corpus through a live service", () => {
  it.each(GOLDEN_PAIRS.map(([raw, clean], row) => ({ row, raw, clean })))(
    "row $row normalizes to the golden string and highlights only service spans",
    async ({ raw, clean }) => {
      const { normalized, edits } = await normalizeOk(raw);
      expect(normalized).toBe(clean);

      const html = diffHtml(raw, edits);
      // Removing the <mark> wrappers must leave the plain rendering of the
      // input: highlights add nothing and omit nothing beyond the spans.
      expect(html.replace(/<\/?mark[^>]*>/g, "")).toBe(textHtml(raw));

      // Each mark corresponds 1:1, in order, to a service-reported span,
      // and its body is exactly the rendering of that span's code points.
      const ordered = [...edits].sort((a: EditSpan, b: EditSpan) => a.start - b.start);
      const marks = markBodies(html);
      expect(marks.map((m) => m.pass)).toEqual(ordered.map((e) => e.pass));
      const points = Array.from(raw);
      ordered.forEach((edit, i) => {
        expect(marks[i]!.inner).toBe(textHtml(points.slice(edit.start, edit.end).join("")));
      });

      // The output pane shows the golden string verbatim (no ghosts, no
      // leftover markup beyond plain HTML escaping).
      expect(textHtml(normalized)).toBe(escapeHtml(clean));
    },
  );

  it("renders zero-width characters as visible placeholders", async () => {
    const [raw] = GOLDEN_PAIRS[ZERO_WIDTH_ROW]!;
    const { edits } = await normalizeOk(raw);
    const html = diffHtml(raw, edits);
    for (const abbrev of ["ZWSP", "ZWJ", "WJ", "BOM"]) {
      expect(html).toContain(`>${abbrev}</span>`);
    }
    expect(html.match(/class="ghost"/g)?.length).toBe(4);
    // Every ghost chip sits inside a highlighted span: the service marked
    // each invisible character for removal.
    for (const mark of markBodies(html)) {
      expect(mark.inner).toContain('class="ghost"');
    }
  });

  it("service-side idempotence: pasting a normalized string is a no-op", async () => {
    for (const [, clean] of GOLDEN_PAIRS) {
      const { normalized, edits } = await normalizeOk(clean);
      expect(normalized).toBe(clean);
      expect(edits).toEqual([]);
    }
  });
});

describe("attack replay through a live service", () => {
  it("same seed gives the same attack, and normalize undoes it", async () => {
    const original = "This is augmented text";
    const first = await client.attack(original, "insert_zero_width_chars", 4242);
    const second = await client.attack(original, "insert_zero_width_chars", 4242);
    if (first.kind !== "ok" || second.kind !== "ok") {
      throw new Error(`attack failed: ${JSON.stringify({ first, second })}`);
    }
    expect(first.data.seed_used).toBe(4242);
    expect(second.data.attacked).toBe(first.data.attacked);
    expect(first.data.attacked).not.toBe(original);

    const { normalized } = await normalizeOk(first.data.attacked);
    expect(normalized).toBe(original);
  });

  it("every attack kind visibly mutates the reference sentence", async () => {
    const original = "This is augmented text";
    const outputs: string[] = [];
    for (const kind of ATTACK_KINDS) {
      const res = await client.attack(original, kind, 7);
      if (res.kind !== "ok") {
        throw new Error(`attack ${kind} failed: ${JSON.stringify(res)}`);
      }
      expect(res.data.attacked).not.toBe(original);
      outputs.push(res.data.attacked);
    }
    expect(new Set(outputs).size).toBe(ATTACK_KINDS.length);
  });

  it("server-chosen seeds are returned and replayable", async () => {
    const res = await client.attack("This is augmented text", "replace_similar_chars");
    if (res.kind !== "ok") {
      throw new Error(`attack failed: ${JSON.stringify(res)}`);
    }
    expect(typeof res.data.seed_used).toBe("number");
    const replay = await client.attack(
      "This is augmented text",
      "replace_similar_chars",
      res.data.seed_used,
    );
    if (replay.kind !== "ok") {
      throw new Error(`replay failed: ${JSON.stringify(replay)}`);
    }
    expect(replay.data.attacked).toBe(res.data.attacked);
  });
});

describe("session log byte fidelity", () => {
  const sessionId = `fidelity-${PORT}`;
  const log = new SessionLog();

  async function scoreIntoLog(
    text: string,
    options: { normalize: boolean; meta?: Record<string, unknown> },
  ): Promise<AttemptRecord> {
    const res = await client.score({
      text,
      normalize: options.normalize,
      session_id: sessionId,
      ...(options.meta === undefined ? {} : { meta: options.meta }),
    });
    if (res.kind !== "ok" || !res.data.attempt) {
      throw new Error(`score failed: ${JSON.stringify(res)}`);
    }
    log.addLive(res.data.attempt);
    return res.data.attempt;
  }

  it("client export matches the service's JSONL log byte-for-byte", async () => {
    const cleanAttempt = await scoreIntoLog("hello world", {
      normalize: true,
      meta: { reference_label: "negative" },
    });
    expect(verdictFor(cleanAttempt)).toBe("defeated");

    const attackAttempt = await scoreIntoLog("I will k​ill you", {
      normalize: true,
      meta: { reference_label: "positive", attack_kind: "zero_width", seed: 42 },
    });
    expect(attackAttempt.label).toBe("negative");
    expect(attackAttempt.normalized_label).toBe("positive");
    expect(verdictFor(attackAttempt)).toBe("defeated");

    const bareAttempt = await scoreIntoLog("a peaceful day", { normalize: true });
    expect(verdictFor(bareAttempt)).toBeNull();

    const bypassedAttempt = await scoreIntoLog("a peaceful day", {
      normalize: true,
      meta: { reference_label: "positive" },
    });
    expect(verdictFor(bypassedAttempt)).toBe("bypassed");

    const served = await readFile(sessionLogPath, "utf-8");
    expect(log.exportJsonl()).toBe(served);
    expect(log.verdictCounts()).toEqual({ defeated: 2, bypassed: 1, unknown: 1 });
  });

  it("export re-imports losslessly", async () => {
    const exported = log.exportJsonl();
    const reimported = new SessionLog();
    reimported.importJsonl(exported);
    expect(reimported.exportJsonl()).toBe(exported);
    expect(reimported.size).toBe(4);
    expect(reimported.verdictCounts()).toEqual(log.verdictCounts());
  });
});

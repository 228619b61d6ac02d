import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("ApiClient", () => {
  it("parses a successful normalize round trip", async () => {
    const client = new ApiClient("", async (url, init) => {
      expect(url).toBe("/normalize");
      expect(JSON.parse(String(init?.body))).toEqual({ text: "a​b" });
      return jsonResponse(200, { normalized: "ab", edits: [] });
    });
    const result = await client.normalize("a​b");
    expect(result).toEqual({ kind: "ok", data: { normalized: "ab", edits: [] } });
  });

  it("discards responses that arrive after a newer request", async () => {
    let release: (() => void) | undefined;
    const slow = new Promise<void>((resolve) => {
      release = resolve;
    });
    let call = 0;
    const client = new ApiClient("", async (_url, init) => {
      call += 1;
      if (call === 1) {
        const signal = init?.signal ?? null;
        await slow;
        // ignore the abort and answer anyway; the seq check must drop it
        void signal;
        return jsonResponse(200, { normalized: "OLD", edits: [] });
      }
      return jsonResponse(200, { normalized: "NEW", edits: [] });
    });

    const first = client.normalize("old text");
    const second = client.normalize("new text");
    const secondResult = await second;
    release!();
    const firstResult = await first;

    expect(secondResult).toEqual({ kind: "ok", data: { normalized: "NEW", edits: [] } });
    expect(firstResult).toEqual({ kind: "stale" });
  });

  it("aborts the previous in-flight request on the same endpoint", async () => {
    const signals: AbortSignal[] = [];
    const client = new ApiClient("", async (_url, init) => {
      signals.push(init!.signal as AbortSignal);
      return jsonResponse(200, { normalized: "x", edits: [] });
    });
    await client.normalize("one");
    const pending = client.normalize("two");
    void client.normalize("three");
    await pending;
    expect(signals.length).toBe(3);
    expect(signals[0]!.aborted).toBe(true); // superseded by "two"
    expect(signals[1]!.aborted).toBe(true); // superseded by "three"
    expect(signals[2]!.aborted).toBe(false);
  });

  it("keeps endpoints independent", async () => {
    const urls: string[] = [];
    const client = new ApiClient("", async (url) => {
      urls.push(url);
      return jsonResponse(200, { status: "ok", version: "0", tables_loaded: 4 });
    });
    const health = client.health();
    const normalize = client.normalize("text");
    expect((await health).kind).toBe("ok"); // not superseded by the normalize call
    expect((await normalize).kind).toBe("ok");
    expect(urls).toEqual(["/health", "/normalize"]);
  });

  it("maps HTTP errors to status and service message", async () => {
    const client = new ApiClient("", async () =>
      jsonResponse(422, { error: "unknown attack kind 'bogus'", valid_kinds: ["merge_words"] }),
    );
    const result = await client.attack("text", "merge_words");
    expect(result).toEqual({
      kind: "http",
      status: 422,
      message: "unknown attack kind 'bogus'",
      body: { error: "unknown attack kind 'bogus'", valid_kinds: ["merge_words"] },
    });
  });

  it("maps network failure to unreachable", async () => {
    const client = new ApiClient("", async () => {
      throw new TypeError("fetch failed");
    });
    const result = await client.score({ text: "x" });
    expect(result.kind).toBe("unreachable");
  });

  it("sends seed and params only when given", async () => {
    const bodies: unknown[] = [];
    const client = new ApiClient("", async (_url, init) => {
      bodies.push(JSON.parse(String(init?.body)));
      return jsonResponse(200, { attacked: "x", params_used: {}, seed_used: 1 });
    });
    await client.attack("t", "split_words");
    await client.attack("t", "split_words", 42, { aug_p: 0.5 });
    expect(bodies).toEqual([
      { text: "t", kind: "split_words" },
      { text: "t", kind: "split_words", seed: 42, params: { aug_p: 0.5 } },
    ]);
  });
});

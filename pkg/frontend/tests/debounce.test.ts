import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { throttleTrailing } from "../src/debounce.js";

describe("throttleTrailing", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("fires at most five times per second at a 200ms interval", () => {
    const calls: number[] = [];
    const throttled = throttleTrailing((n: number) => calls.push(n), 200);
    // a keystroke every 20ms for one second
    for (let i = 0; i < 50; i++) {
      throttled(i);
      vi.advanceTimersByTime(20);
    }
    vi.runAllTimers();
    expect(calls.length).toBeLessThanOrEqual(5 + 1); // steady rate plus the trailing flush
    expect(calls.length).toBeGreaterThanOrEqual(5);
  });

  it("always delivers the latest arguments", () => {
    const calls: string[] = [];
    const throttled = throttleTrailing((s: string) => calls.push(s), 200);
    throttled("a");
    throttled("b");
    throttled("c");
    vi.runAllTimers();
    expect(calls).toEqual(["c"]);
  });

  it("spaces consecutive fires a full interval apart", () => {
    const calls: string[] = [];
    const throttled = throttleTrailing((s: string) => calls.push(s), 200);
    throttled("first");
    vi.advanceTimersByTime(1); // leading fire lands at t=0
    expect(calls).toEqual(["first"]);
    throttled("second"); // at t=1, due at t=200
    vi.advanceTimersByTime(198);
    expect(calls).toEqual(["first"]);
    vi.advanceTimersByTime(1);
    expect(calls).toEqual(["first", "second"]);
  });

  it("cancel drops the pending call", () => {
    const calls: string[] = [];
    const throttled = throttleTrailing((s: string) => calls.push(s), 200);
    throttled("doomed");
    throttled.cancel();
    vi.runAllTimers();
    expect(calls).toEqual([]);
  });
});

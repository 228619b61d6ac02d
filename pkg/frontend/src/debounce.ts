/** Trailing-edge throttle: the wrapped function fires at most once per
 * interval, always with the latest arguments, and never drops the final
 * call of a burst. 200 ms keeps live normalization at or under 5
 * requests per second. */

export interface Throttled<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
}

export function throttleTrailing<A extends unknown[]>(
  fn: (...args: A) => void,
  intervalMs: number,
): Throttled<A> {
  let lastFired = Number.NEGATIVE_INFINITY;
  let timer: ReturnType<typeof setTimeout> | undefined;
  let pendingArgs: A | undefined;

  const fire = () => {
    timer = undefined;
    lastFired = Date.now();
    const args = pendingArgs as A;
    pendingArgs = undefined;
    fn(...args);
  };

  const throttled = (...args: A) => {
    pendingArgs = args;
    if (timer === undefined) {
      timer = setTimeout(fire, Math.max(0, lastFired + intervalMs - Date.now()));
    }
  };
  throttled.cancel = () => {
    if (timer !== undefined) {
      clearTimeout(timer);
      timer = undefined;
    }
    pendingArgs = undefined;
  };
  return throttled;
}

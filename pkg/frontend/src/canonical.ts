/** Canonical JSON writer whose bytes match the service's session log
 * serializer: recursively sorted keys, compact separators, non-ASCII kept
 * raw, and floats printed the way Python's repr prints them.
 *
 * JSON.parse cannot tell `0.0` from `0`, so float-typed fields must be
 * marked explicitly with PyFloat before serialization; see session.ts for
 * the attempt-record schema mapping.
 */

export class PyFloat {
  constructor(readonly value: number) {
    if (!Number.isFinite(value)) {
      throw new Error(`non-finite float ${value} cannot be serialized`);
    }
  }
}

export type Canonical =
  | null
  | boolean
  | number
  | string
  | PyFloat
  | Canonical[]
  | { [key: string]: Canonical };

/** Python repr() for a finite double: fixed notation while the decimal
 * exponent is in [-4, 16), otherwise scientific with a sign and at least
 * two exponent digits. */
export function pyFloatRepr(value: number): string {
  if (!Number.isFinite(value)) {
    throw new Error(`non-finite float ${value}`);
  }
  if (value === 0) {
    return Object.is(value, -0) ? "-0.0" : "0.0";
  }
  const sign = value < 0 ? "-" : "";
  // toExponential() without an argument yields the shortest digit string
  // that round-trips, the same digits Python's repr chooses.
  const [mantissa, expText] = Math.abs(value).toExponential().split("e") as [string, string];
  const digits = mantissa.replace(".", "");
  const exp = Number(expText);

  if (exp >= -4 && exp < 16) {
    if (exp >= 0) {
      const intDigits = exp + 1;
      const whole = digits.padEnd(intDigits, "0").slice(0, intDigits);
      const frac = digits.slice(intDigits);
      return `${sign}${whole}.${frac || "0"}`;
    }
    return `${sign}0.${"0".repeat(-exp - 1)}${digits}`;
  }
  const mantissaOut = digits.length === 1 ? digits : `${digits[0]}.${digits.slice(1)}`;
  const expOut = `${exp < 0 ? "-" : "+"}${String(Math.abs(exp)).padStart(2, "0")}`;
  return `${sign}${mantissaOut}e${expOut}`;
}

/** Sort the way Python sorts str keys: by code point, not UTF-16 unit. */
export function compareCodePoints(a: string, b: string): number {
  const left = Array.from(a);
  const right = Array.from(b);
  const n = Math.min(left.length, right.length);
  for (let i = 0; i < n; i++) {
    const diff = (left[i] as string).codePointAt(0)! - (right[i] as string).codePointAt(0)!;
    if (diff !== 0) {
      return diff;
    }
  }
  return left.length - right.length;
}

export function canonicalJson(value: Canonical): string {
  if (value === null) {
    return "null";
  }
  if (typeof value === "boolean") {
    return value ? "true" : "false";
  }
  if (typeof value === "number") {
    if (!Number.isInteger(value)) {
      throw new Error(
        `plain number ${value} is not an integer; wrap floats in PyFloat so 0.0 and 0 stay distinct`,
      );
    }
    return String(value);
  }
  if (typeof value === "string") {
    // JSON.stringify and Python's ensure_ascii=False agree on escapes:
    // quote, backslash, and control characters below U+0020 only.
    return JSON.stringify(value);
  }
  if (value instanceof PyFloat) {
    return pyFloatRepr(value.value);
  }
  if (Array.isArray(value)) {
    return `[${value.map(canonicalJson).join(",")}]`;
  }
  const keys = Object.keys(value).sort(compareCodePoints);
  const parts = keys.map((key) => `${JSON.stringify(key)}:${canonicalJson(value[key] as Canonical)}`);
  return `{${parts.join(",")}}`;
}

/** HTML fragments for the diff and score panes.
 *
 * Rendering fidelity rule: highlights come ONLY from the service's edit
 * spans; nothing here re-implements normalization. The one piece of local
 * character knowledge is INVISIBLE_NOTES, display metadata that gives
 * zero-size codepoints a visible placeholder glyph so a human can see
 * what a classifier cannot.
 */

import type { EditSpan, Score } from "./types.js";

export interface InvisibleNote {
  abbrev: string;
  name: string;
}

export const INVISIBLE_NOTES: ReadonlyMap<number, InvisibleNote> = new Map([
  [0x200b, { abbrev: "ZWSP", name: "zero width space" }],
  [0x200c, { abbrev: "ZWNJ", name: "zero width non-joiner" }],
  [0x200d, { abbrev: "ZWJ", name: "zero width joiner" }],
  [0x2060, { abbrev: "WJ", name: "word joiner" }],
  [0xfeff, { abbrev: "BOM", name: "zero width no-break space" }],
  [0x00ad, { abbrev: "SHY", name: "soft hyphen" }],
]);

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function codePointLabel(cp: number): string {
  return `U+${cp.toString(16).toUpperCase().padStart(4, "0")}`;
}

/** One character as HTML: invisible codepoints become placeholder chips. */
function charHtml(ch: string): string {
  const cp = ch.codePointAt(0)!;
  const note = INVISIBLE_NOTES.get(cp);
  if (note !== undefined) {
    return `<span class="ghost" title="${codePointLabel(cp)} ${note.name}">${note.abbrev}</span>`;
  }
  return escapeHtml(ch);
}

/** Plain text with placeholder glyphs, no highlight spans. */
export function textHtml(text: string): string {
  let out = "";
  for (const ch of text) {
    out += charHtml(ch);
  }
  return out;
}

/** The input pane: every service edit span wrapped in a <mark>.
 *
 * Edit offsets count code points (the service's string indices), so the
 * input is sliced through a code-point array, never by UTF-16 index.
 */
export function diffHtml(input: string, edits: readonly EditSpan[]): string {
  const points = Array.from(input);
  const ordered = [...edits].sort((a, b) => a.start - b.start);
  let out = "";
  let cursor = 0;
  for (const edit of ordered) {
    out += textHtml(points.slice(cursor, edit.start).join(""));
    const source = points.slice(edit.start, edit.end).join("");
    const title =
      edit.replacement === ""
        ? `${edit.pass}: removed`
        : `${edit.pass}: → ${escapeHtml(edit.replacement)}`;
    out += `<mark class="edit" data-pass="${escapeHtml(edit.pass)}" title="${title}">${textHtml(source)}</mark>`;
    cursor = edit.end;
  }
  out += textHtml(points.slice(cursor).join(""));
  return out;
}

export function formatScore(score: Score): string {
  if (Array.isArray(score)) {
    return score.map((v) => v.toFixed(2)).join(" / ");
  }
  return score.toFixed(2);
}

export function scoreBadgeHtml(label: string, score: Score): string {
  return `<span class="badge label-${escapeHtml(label)}">${escapeHtml(label)} ${formatScore(score)}</span>`;
}

import { describe, expect, it } from "vitest";

import { INVISIBLE_NOTES, diffHtml, escapeHtml, formatScore, textHtml } from "../src/render.js";
import type { EditSpan } from "../src/types.js";

/** Collapse rendered HTML back to text, ghost chips included as [ABBR]. */
function visibleText(html: string): string {
  return html
    .replace(/<span class="ghost"[^>]*>([^<]*)<\/span>/g, "[$1]")
    .replace(/<\/?mark[^>]*>/g, "")
    .replaceAll("&amp;", "&")
    .replaceAll("&lt;", "<")
    .replaceAll("&gt;", ">")
    .replaceAll("&quot;", '"');
}

describe("textHtml", () => {
  it("escapes markup", () => {
    expect(textHtml('<b>&"</b>')).toBe("&lt;b&gt;&amp;&quot;&lt;/b&gt;");
    expect(escapeHtml("a<b")).toBe("a&lt;b");
  });

  it("renders every zero-width codepoint as a visible placeholder", () => {
    for (const [cp, note] of INVISIBLE_NOTES) {
      const html = textHtml(`a${String.fromCodePoint(cp)}b`);
      expect(html).toContain(`>${note.abbrev}</span>`);
      expect(html).toContain(`U+${cp.toString(16).toUpperCase().padStart(4, "0")}`);
      expect(visibleText(html)).toBe(`a[${note.abbrev}]b`);
    }
  });
});

describe("diffHtml", () => {
  it("wraps exactly the service-reported spans", () => {
    const input = "a​b";
    const edits: EditSpan[] = [{ start: 1, end: 2, replacement: "", pass: "zero_width" }];
    const html = diffHtml(input, edits);
    expect(html).toBe(
      'a<mark class="edit" data-pass="zero_width" title="zero_width: removed">' +
        '<span class="ghost" title="U+200B zero width space">ZWSP</span></mark>b',
    );
  });

  it("renders no marks for clean text", () => {
    const html = diffHtml("plain text", []);
    expect(html).toBe("plain text");
    expect(html).not.toContain("<mark");
  });

  it("slices by code point so astral characters stay intact", () => {
    // U+1D400 is one code point but two UTF-16 units; the edit span
    // uses the service's code-point offsets.
    const input = "\u{1d400}x!";
    const edits: EditSpan[] = [{ start: 0, end: 1, replacement: "A", pass: "confusables" }];
    const html = diffHtml(input, edits);
    expect(html).toContain(">\u{1d400}</mark>");
    expect(visibleText(html)).toBe("\u{1d400}x!");
  });

  it("orders overlapping-free spans and shows replacements in titles", () => {
    const input = "Ｔ and Ｅ";
    const edits: EditSpan[] = [
      { start: 6, end: 7, replacement: "E", pass: "confusables" },
      { start: 0, end: 1, replacement: "T", pass: "confusables" },
    ];
    const html = diffHtml(input, edits);
    expect(html.indexOf("Ｔ")).toBeLessThan(html.indexOf("Ｅ"));
    expect(html).toContain('title="confusables: → T"');
    const markCount = (html.match(/<mark /g) ?? []).length;
    expect(markCount).toBe(2);
  });

  it("keeps multi-codepoint gaps between spans verbatim", () => {
    const input = "T h i s";
    const edits: EditSpan[] = [
      { start: 1, end: 2, replacement: "", pass: "insertion_collapse" },
      { start: 3, end: 4, replacement: "", pass: "insertion_collapse" },
      { start: 5, end: 6, replacement: "", pass: "insertion_collapse" },
    ];
    expect(visibleText(diffHtml(input, edits))).toBe("T h i s");
  });
});

describe("formatScore", () => {
  it("formats binary and distribution scores", () => {
    expect(formatScore(0.5)).toBe("0.50");
    expect(formatScore([0.2, 0.5, 0.3])).toBe("0.20 / 0.50 / 0.30");
  });
});

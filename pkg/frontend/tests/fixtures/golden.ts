// Attacked-input / normalized-output pairs mirrored from the Python test
// fixtures (tests/conftest.py GOLDEN_PAIRS).  Non-ASCII characters are
// escaped so the strings survive any editor or transpiler encoding step.
export const GOLDEN_PAIRS: ReadonlyArray<readonly [string, string]> = [
  ["This is augmented text", "This is augmented text"],
  ["Th.i.s ,is ...a.ug;m!en't?ed, ,te!x.t", "This ,is ...augmented, ,text"],
  ["T h i s  is  a u g m e n t e d   text", "This is augmented text"],
  ["Th\u{200B}is is aug\u{200D}men\u{2060}ted te\u{FEFF}xt", "This is augmented text"],
  ["Thisis augmented text", "Thisis augmented text"],
  ["\u{1D683}\u{1D691}\u{1D692}\u{1D69C} \u{1D692}\u{1D69C} \u{1D68A}\u{1D69E}\u{1D690}\u{1D696}\u{1D68E}\u{1D697}\u{1D69D}\u{1D68E}\u{1D68D} \u{1D69D}\u{1D68E}\u{1D6A1}\u{1D69D}", "This is augmented text"],
  ["Th!s is @ugmented tex7", "Th!s is @ugmented tex7"],
  ["Th\u{456}\u{455} \u{456}\u{455} \u{430}u\u{210A}\u{FF4D}\u{435}\u{F1}t\u{435}\u{2146} \u{FF54}\u{FF45}\u{FF58}\u{FF54}", "This is augmented text"],
  ["This is augmentde texht", "This is augmentde texht"],
  ["Th is is augment ed text", "Th is is augment ed text"],
];

// Index of the zero-width row above, used to assert placeholder rendering.
export const ZERO_WIDTH_ROW = 3;

/** Page wiring: a single-user console over the normalization service.
 *
 * Left pane: attack input with live diff against the service's edit
 * spans. Right pane: normalized output, raw vs normalized scores, and
 * the attempt log with verdicts and JSONL export/import.
 */

import { ApiClient } from "./api.js";
import { throttleTrailing } from "./debounce.js";
import { diffHtml, escapeHtml, scoreBadgeHtml, textHtml } from "./render.js";
import { SessionLog, verdictFor } from "./session.js";
import { ATTACK_KINDS, type AttackKind, type AttemptRecord } from "./types.js";

const api = new ApiClient("");
const log = new SessionLog();
const sessionId = `web-${crypto.randomUUID()}`;

let referenceLabel: string | null = null;
let lastAttack: { kind: AttackKind; seed: number } | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

const input = el<HTMLTextAreaElement>("attack-input");
const diffPane = el<HTMLDivElement>("diff-pane");
const normalizedPane = el<HTMLDivElement>("normalized-pane");
const editCount = el<HTMLSpanElement>("edit-count");
const banner = el<HTMLDivElement>("banner");
const bannerText = el<HTMLSpanElement>("banner-text");
const retryButton = el<HTMLButtonElement>("banner-retry");
const attackButtons = el<HTMLDivElement>("attack-buttons");
const seedBox = el<HTMLSpanElement>("seed-box");
const copySeedButton = el<HTMLButtonElement>("copy-seed");
const referenceInput = el<HTMLInputElement>("reference-input");
const setReferenceButton = el<HTMLButtonElement>("set-reference");
const referenceStatus = el<HTMLSpanElement>("reference-status");
const scoreButton = el<HTMLButtonElement>("score-attempt");
const rawScoreBox = el<HTMLSpanElement>("raw-score");
const normScoreBox = el<HTMLSpanElement>("norm-score");
const verdictBox = el<HTMLSpanElement>("verdict-box");
const attemptsBody = el<HTMLTableSectionElement>("attempts-body");
const verdictFooter = el<HTMLSpanElement>("verdict-footer");
const exportButton = el<HTMLButtonElement>("export-log");
const importInput = el<HTMLInputElement>("import-log");
const healthBox = el<HTMLSpanElement>("health-box");

function showBanner(message: string): void {
  bannerText.textContent = message;
  banner.hidden = false;
}

function hideBanner(): void {
  banner.hidden = true;
}

async function checkHealth(): Promise<void> {
  const result = await api.health();
  if (result.kind === "ok") {
    healthBox.textContent = `service ok, v${result.data.version}, ${result.data.tables_loaded} tables`;
    hideBanner();
  } else if (result.kind !== "stale") {
    healthBox.textContent = "service unreachable";
    showBanner("The normalization service is not reachable. Your input is preserved.");
  }
}

async function refreshDiff(): Promise<void> {
  const text = input.value;
  if (text === "") {
    diffPane.innerHTML = "";
    normalizedPane.innerHTML = "";
    editCount.textContent = "";
    return;
  }
  const result = await api.normalize(text);
  if (result.kind === "stale") {
    return;
  }
  if (result.kind !== "ok") {
    showBanner(
      result.kind === "unreachable"
        ? "The normalization service is not reachable. Your input is preserved."
        : `Normalize failed: ${result.message}`,
    );
    return;
  }
  hideBanner();
  diffPane.innerHTML = diffHtml(text, result.data.edits);
  normalizedPane.innerHTML = textHtml(result.data.normalized);
  const n = result.data.edits.length;
  editCount.textContent = n === 0 ? "no edits" : `${n} edit${n === 1 ? "" : "s"}`;
}

const liveNormalize = throttleTrailing(() => {
  void refreshDiff();
}, 200);

input.addEventListener("input", () => {
  liveNormalize();
});

retryButton.addEventListener("click", () => {
  void checkHealth().then(() => refreshDiff());
});

// ---------------------------------------------------------------------------
// Attack buttons

for (const kind of ATTACK_KINDS) {
  const button = document.createElement("button");
  button.textContent = kind.replaceAll("_", " ");
  button.dataset.kind = kind;
  button.addEventListener("click", () => {
    void applyAttack(kind, button);
  });
  attackButtons.appendChild(button);
}

async function applyAttack(kind: AttackKind, button: HTMLButtonElement): Promise<void> {
  const text = input.value;
  if (text === "") {
    return; // attacking nothing is a no-op
  }
  const result = await api.attack(text, kind);
  if (result.kind === "stale") {
    return;
  }
  if (result.kind === "http" && result.status === 422) {
    button.disabled = true;
    button.title = result.message;
    return;
  }
  if (result.kind !== "ok") {
    showBanner(
      result.kind === "unreachable"
        ? "The normalization service is not reachable. Your input is preserved."
        : `Attack failed: ${result.message}`,
    );
    return;
  }
  hideBanner();
  input.value = result.data.attacked;
  lastAttack = { kind, seed: result.data.seed_used };
  seedBox.textContent = `${kind} seed ${result.data.seed_used}`;
  copySeedButton.hidden = false;
  liveNormalize();
}

copySeedButton.addEventListener("click", () => {
  if (lastAttack !== null) {
    void navigator.clipboard.writeText(String(lastAttack.seed));
  }
});

// ---------------------------------------------------------------------------
// Reference sentence and scoring

setReferenceButton.addEventListener("click", () => {
  void setReference();
});

async function setReference(): Promise<void> {
  const text = referenceInput.value;
  if (text === "") {
    return;
  }
  const result = await api.score({ text, normalize: false });
  if (result.kind === "stale") {
    return;
  }
  if (result.kind !== "ok") {
    showBanner(`Scoring the reference failed: ${result.kind === "http" ? result.message : "service unreachable"}`);
    return;
  }
  hideBanner();
  referenceLabel = result.data.label;
  referenceStatus.innerHTML = `reference ${scoreBadgeHtml(result.data.label, result.data.score)}`;
  scoreButton.disabled = false;
}

scoreButton.addEventListener("click", () => {
  void scoreAttempt();
});

async function scoreAttempt(): Promise<void> {
  const text = input.value;
  if (text === "" || referenceLabel === null) {
    return;
  }
  const meta: Record<string, unknown> = { reference_label: referenceLabel };
  if (lastAttack !== null) {
    meta.attack_kind = lastAttack.kind;
    meta.seed = lastAttack.seed;
  }
  const result = await api.score({
    text,
    normalize: true,
    session_id: sessionId,
    meta,
  });
  if (result.kind === "stale") {
    return;
  }
  if (result.kind !== "ok") {
    showBanner(`Scoring failed: ${result.kind === "http" ? result.message : "service unreachable"}`);
    return;
  }
  hideBanner();
  const data = result.data;
  rawScoreBox.innerHTML = scoreBadgeHtml(data.label, data.score);
  if (data.normalized !== null) {
    normScoreBox.innerHTML = scoreBadgeHtml(data.normalized.label, data.normalized.score);
  }
  if (data.attempt !== undefined) {
    log.addLive(data.attempt);
    renderAttempts();
  }
  const verdict = data.attempt !== undefined ? verdictFor(data.attempt) : null;
  verdictBox.textContent = verdict ?? "";
  verdictBox.className = `verdict ${verdict ?? ""}`;
}

// ---------------------------------------------------------------------------
// Attempt table, export, import

function attemptRowHtml(record: AttemptRecord): string {
  const verdict = verdictFor(record);
  return (
    `<tr><td>${record.seq}</td>` +
    `<td class="mono">${textHtml(record.input)}</td>` +
    `<td>${escapeHtml(record.label)}</td>` +
    `<td>${escapeHtml(record.normalized_label ?? "?")}</td>` +
    `<td><span class="verdict ${verdict ?? ""}">${verdict ?? "?"}</span></td></tr>`
  );
}

function renderAttempts(): void {
  attemptsBody.innerHTML = log.records.map(attemptRowHtml).join("");
  const counts = log.verdictCounts();
  verdictFooter.textContent =
    `${log.size} attempts: ${counts.defeated} defeated, ${counts.bypassed} bypassed` +
    (counts.unknown > 0 ? `, ${counts.unknown} unknown` : "");
  exportButton.disabled = !log.canExport;
}

exportButton.addEventListener("click", () => {
  if (!log.canExport) {
    return;
  }
  const blob = new Blob([log.exportJsonl()], { type: "application/jsonl" });
  const anchor = document.createElement("a");
  anchor.href = URL.createObjectURL(blob);
  anchor.download = `${sessionId}.jsonl`;
  anchor.click();
  URL.revokeObjectURL(anchor.href);
});

importInput.addEventListener("change", () => {
  const file = importInput.files?.[0];
  if (file === undefined) {
    return;
  }
  void file.text().then((content) => {
    try {
      log.importJsonl(content);
    } catch (error) {
      showBanner(`Import failed: ${String(error)}`);
      return;
    }
    hideBanner();
    renderAttempts();
  });
});

// ---------------------------------------------------------------------------

renderAttempts();
void checkHealth();
setInterval(() => {
  void checkHealth();
}, 15000);

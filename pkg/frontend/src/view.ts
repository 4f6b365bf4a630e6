// Pure snapshot -> markup rendering; everything shown derives from the
// snapshot payload alone, formulas stay in their ASCII wire form.

import type { HistoryEntry, LeadingEntry, Snapshot } from "./api.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface Bar {
  label: string;
  percent: number;
}

export function diagnosisLabel(ids: number[]): string {
  return `[${ids.join(" ")}]`;
}

export function probabilityBars(leading: LeadingEntry[]): Bar[] {
  return leading.map((entry) => ({
    label: diagnosisLabel(entry.ids),
    percent: Math.round(entry.probability * 1000) / 10,
  }));
}

export function barsTotal(bars: Bar[]): number {
  return bars.reduce((sum, bar) => sum + bar.percent, 0);
}

export function renderProbabilityPanel(leading: LeadingEntry[]): string {
  if (leading.length === 0) return `<div class="bars empty">no candidates yet</div>`;
  const rows = probabilityBars(leading)
    .map(
      (bar) =>
        `<div class="bar-row"><span class="bar-label">${escapeHtml(bar.label)}</span>` +
        `<span class="bar" style="width:${bar.percent}%"></span>` +
        `<span class="bar-value">${bar.percent.toFixed(1)}%</span></div>`,
    )
    .join("");
  return `<div class="bars">${rows}</div>`;
}

export function renderPendingQuery(query: string[]): string {
  const items = query.map((f) => `<li><code>${escapeHtml(f)}</code></li>`).join("");
  return (
    `<div class="query"><p>Should the intended KB entail all of:</p>` +
    `<ul>${items}</ul>` +
    `<div class="controls">` +
    `<button data-answer="yes">yes</button>` +
    `<button data-answer="no">no</button>` +
    `<button data-answer="skip">skip</button>` +
    `<button data-answer="abort">abort with current best</button>` +
    `</div></div>`
  );
}

export function renderHistory(history: HistoryEntry[]): string {
  if (history.length === 0) return `<ol class="history empty"></ol>`;
  const rows = history
    .map((entry, i) => {
      const formulas = entry.query.map((f) => `<code>${escapeHtml(f)}</code>`).join(", ");
      const verdict = entry.answer ? "yes" : "no";
      return `<li>Q${i + 1}: {${formulas}} &rarr; <b class="${verdict}">${verdict}</b></li>`;
    })
    .join("");
  return `<ol class="history">${rows}</ol>`;
}

export function addedTestCases(history: HistoryEntry[]): string[][] {
  return history.filter((entry) => entry.answer).map((entry) => entry.query);
}

export function renderSolutionDiff(snap: Snapshot): string {
  const removed = snap.solution_diagnosis ?? [];
  const removedText = removed.length
    ? `removed: formulas ${removed.join(", ")}`
    : "removed: nothing";
  const added = addedTestCases(snap.history);
  const addedHtml = added.length
    ? `<ul class="added">${added
        .map((q) => q.map((f) => `<li><code>${escapeHtml(f)}</code></li>`).join(""))
        .join("")}</ul>`
    : `<p class="added empty">no knowledge added</p>`;
  const kept = (snap.solution ?? [])
    .map((f) => `<li><code>${escapeHtml(f)}</code></li>`)
    .join("");
  return (
    `<div class="solution"><h2>Debugging finished</h2>` +
    `<p class="removed">${escapeHtml(removedText)}</p>` +
    `<h3>added knowledge</h3>${addedHtml}` +
    `<h3>solution KB</h3><ul class="kept">${kept}</ul></div>`
  );
}

export function renderStatusLine(snap: Snapshot): string {
  const sizes = snap.qpartition_sizes;
  const sizesText = sizes ? ` &middot; split ${sizes.dx}/${sizes.dnx}/${sizes.dz}` : "";
  return (
    `<div class="status">mode <b>${escapeHtml(snap.mode)}</b>` +
    ` &middot; &sigma;=${snap.sigma}` +
    ` &middot; ${escapeHtml(snap.status)}${sizesText}</div>`
  );
}

export function renderSession(snap: Snapshot): string {
  const parts = [renderStatusLine(snap)];
  if (snap.status === "failed") {
    parts.push(`<div class="error">${escapeHtml(snap.error ?? "session failed")}</div>`);
  } else if (snap.status === "done") {
    parts.push(renderSolutionDiff(snap));
  } else if (snap.status === "computing") {
    parts.push(`<div class="computing">computing&hellip;</div>`);
  } else if (snap.pending_query) {
    parts.push(renderPendingQuery(snap.pending_query));
  }
  parts.push(`<h3>candidate diagnoses</h3>`);
  parts.push(renderProbabilityPanel(snap.leading));
  parts.push(`<h3>answered queries</h3>`);
  parts.push(renderHistory(snap.history));
  return `<div class="session">${parts.join("")}</div>`;
}

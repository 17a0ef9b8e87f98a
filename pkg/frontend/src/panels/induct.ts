/** Induction preview dialog: server-proposed rules with accept/reject. */

import { escapeHtml, fmt } from "../format.js";
import type { InductResponse } from "../types.js";

export function renderInductPreview(preview: InductResponse): string {
  if (preview.rules.length === 0) {
    return `<p class="empty">no rules survived filtering for ${escapeHtml(preview.class)}</p>`;
  }
  const rows = preview.rules
    .map(
      (r, i) =>
        `<tr><td><input type="checkbox" checked data-induct-row="${i}"></td>` +
        `<td><code>${escapeHtml(r.query)}</code></td>` +
        `<td>${fmt(r.precision)}</td><td>${fmt(r.recall)}</td><td>${fmt(r.f1)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="induct-preview"><thead><tr><th></th><th>rule</th>` +
    `<th>P</th><th>R</th><th>F1</th></tr></thead><tbody>${rows}</tbody></table>` +
    `<div class="induct-actions">` +
    `<button data-induct-accept="${preview.seed}">accept checked</button>` +
    `<button data-induct-cancel>cancel</button></div>`
  );
}

/** Panels (5) and (6): live train/validation scoreboards.
 *
 * Every number is lifted verbatim from a served report; nothing is
 * recomputed here beyond decimal formatting.
 */

import { escapeHtml, fmt } from "../format.js";
import type { Report } from "../types.js";

export interface ScoreRow {
  label: string;
  precision: number;
  recall: number;
  f1: number;
  support: number | null;
}

export interface ScoreboardModel {
  part: string;
  rows: ScoreRow[];
  excluded: string[];
}

export function scoreboardModel(report: Report): ScoreboardModel {
  const rows: ScoreRow[] = Object.entries(report.per_class).map(([name, ev]) => ({
    label: name,
    precision: ev.precision,
    recall: ev.recall,
    f1: ev.f1,
    support: report.support[name] ?? null,
  }));
  rows.push({ label: "overall", ...report.overall, support: null });
  rows.push({ label: "overall-w", ...report.overall_w, support: null });
  return { part: report.part, rows, excluded: report.excluded_classes };
}

export function renderScoreboard(model: ScoreboardModel): string {
  const body = model.rows
    .map(
      (r) =>
        `<tr><td>${escapeHtml(r.label)}</td><td>${fmt(r.precision)}</td>` +
        `<td>${fmt(r.recall)}</td><td>${fmt(r.f1)}</td>` +
        `<td>${r.support === null ? "" : r.support}</td></tr>`,
    )
    .join("");
  const excluded = model.excluded.length
    ? `<div class="excluded">no rules yet: ${model.excluded.map(escapeHtml).join(", ")}</div>`
    : "";
  return (
    `<h3>${escapeHtml(model.part)}</h3>` +
    `<table class="scoreboard"><thead><tr><th>class</th><th>P</th><th>R</th>` +
    `<th>F1</th><th>support</th></tr></thead><tbody>${body}</tbody></table>` +
    excluded
  );
}

/** Panel (2): the sortable term table.
 *
 * Ordering always comes from the service response; this module renders rows
 * exactly as served and never re-sorts client-side.
 */

import { escapeHtml, fmt } from "../format.js";
import type { SortColumn, SortDirection, TermRow } from "../types.js";

export const TERM_COLUMNS: { key: SortColumn; label: string }[] = [
  { key: "df_in", label: "df in" },
  { key: "df_out", label: "df out" },
  { key: "term_precision", label: "P" },
  { key: "term_recall", label: "R" },
  { key: "term_f1", label: "F1" },
  { key: "lift", label: "lift" },
];

export interface TermTableModel {
  ngrams: string[];
  cells: string[][]; // formatted, aligned with TERM_COLUMNS
  sort: { column: SortColumn; dir: SortDirection };
}

export function termTableModel(
  rows: TermRow[],
  sort: { column: SortColumn; dir: SortDirection },
): TermTableModel {
  return {
    ngrams: rows.map((r) => r.ngram),
    cells: rows.map((r) => [
      String(r.df_in),
      String(r.df_out),
      fmt(r.term_precision),
      fmt(r.term_recall),
      fmt(r.term_f1),
      fmt(r.lift),
    ]),
    sort,
  };
}

export function renderTermTable(model: TermTableModel): string {
  const header = TERM_COLUMNS.map((c) => {
    const marker =
      model.sort.column === c.key ? (model.sort.dir === "desc" ? " ▾" : " ▴") : "";
    return `<th data-sort="${c.key}">${escapeHtml(c.label)}${marker}</th>`;
  }).join("");
  const body = model.ngrams
    .map((ngram, i) => {
      const cells = model.cells[i].map((v) => `<td>${escapeHtml(v)}</td>`).join("");
      return (
        `<tr><td class="term" data-ngram="${escapeHtml(ngram)}">` +
        `${escapeHtml(ngram)}</td>${cells}</tr>`
      );
    })
    .join("");
  return (
    `<table class="term-table"><thead><tr><th>n-gram</th>${header}</tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}

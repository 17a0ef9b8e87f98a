/** Panel (1): class list with per-part gold supports. */

import { escapeHtml } from "../format.js";
import type { ClassEntry } from "../types.js";

export interface ClassRow {
  name: string;
  train: number;
  validation: number;
  test: number;
  selected: boolean;
}

export function classRows(entries: ClassEntry[], selected: string | null): ClassRow[] {
  return entries.map((e) => ({
    name: e.name,
    train: e.support.train,
    validation: e.support.validation,
    test: e.support.test,
    selected: e.name === selected,
  }));
}

export function renderClassPanel(rows: ClassRow[]): string {
  const items = rows
    .map(
      (r) =>
        `<li class="class-row${r.selected ? " selected" : ""}" data-class="${escapeHtml(r.name)}">` +
        `<span class="class-name">${escapeHtml(r.name)}</span>` +
        `<span class="class-support">${r.train} / ${r.validation}</span></li>`,
    )
    .join("");
  return `<ul class="class-list">${items}</ul>`;
}

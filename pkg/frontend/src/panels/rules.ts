/** Rule manager: saved rules per class with delete controls. */

import { escapeHtml } from "../format.js";
import type { RuleEntry } from "../types.js";

export function renderRules(rules: RuleEntry[], selectedClass: string | null): string {
  const visible = selectedClass
    ? rules.filter((r) => r.class === selectedClass)
    : rules;
  if (visible.length === 0) {
    return `<p class="empty">no saved rules${selectedClass ? ` for ${escapeHtml(selectedClass)}` : ""}</p>`;
  }
  const items = visible
    .map(
      (r) =>
        `<li class="rule" data-rule="${escapeHtml(r.id)}">` +
        `<code>${escapeHtml(r.query)}</code>` +
        `<span class="rule-class">${escapeHtml(r.class)}</span>` +
        (r.note ? `<span class="rule-note">${escapeHtml(r.note)}</span>` : "") +
        `<button class="delete" data-delete="${escapeHtml(r.id)}">✕</button></li>`,
    )
    .join("");
  return `<ul class="rule-list">${items}</ul>`;
}

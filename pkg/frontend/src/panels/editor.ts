/** Panel (3): query editor error rendering at the parser-reported offset. */

import { escapeHtml } from "../format.js";

export interface InlineError {
  message: string;
  position: number;
}

/** Two-line monospace marker: the query, then a caret under the offset. */
export function caretLines(query: string, position: number): [string, string] {
  const clamped = Math.max(0, Math.min(position, query.length));
  return [query, " ".repeat(clamped) + "^"];
}

export function renderQueryError(query: string, err: InlineError): string {
  const [line, caret] = caretLines(query, err.position);
  return (
    `<div class="query-error"><pre>${escapeHtml(line)}\n${escapeHtml(caret)}</pre>` +
    `<span class="message">${escapeHtml(err.message)}</span></div>`
  );
}

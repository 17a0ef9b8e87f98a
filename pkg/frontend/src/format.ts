/** Shared rendering helpers: numbers to 3 decimals, HTML escaping,
 * and highlight markup from server-provided character spans. */

export function fmt(x: number): string {
  return x.toFixed(3);
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Wrap the given [start, end) spans of raw text in <mark> tags. Spans come
 * from the service (it owns tokenizer semantics) and arrive merged and
 * sorted, so a single left-to-right pass suffices. */
export function highlight(text: string, spans: [number, number][] | undefined): string {
  if (!spans || spans.length === 0) {
    return escapeHtml(text);
  }
  const parts: string[] = [];
  let cursor = 0;
  for (const [start, end] of spans) {
    parts.push(escapeHtml(text.slice(cursor, start)));
    parts.push(`<mark>${escapeHtml(text.slice(start, end))}</mark>`);
    cursor = end;
  }
  parts.push(escapeHtml(text.slice(cursor)));
  return parts.join("");
}

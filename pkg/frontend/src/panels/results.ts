/** Panel (4): matched documents with highlights, plus FP/FN toggles. */

import { escapeHtml, fmt, highlight } from "../format.js";
import type { DocSample, QueryEvalResponse } from "../types.js";

export type ResultsView = "matched" | "false_positives" | "false_negatives";

export interface ResultsModel {
  total: number;
  view: ResultsView;
  views: ResultsView[];
  docs: DocSample[];
  evalLine: string | null;
}

export function resultsModel(
  response: QueryEvalResponse,
  view: ResultsView,
): ResultsModel {
  const views: ResultsView[] = ["matched"];
  if (response.samples.false_positives) views.push("false_positives");
  if (response.samples.false_negatives) views.push("false_negatives");
  const active = views.includes(view) ? view : "matched";
  const ev = response.eval;
  return {
    total: response.total_matched,
    view: active,
    views,
    docs: response.samples[active] ?? [],
    evalLine: ev
      ? `P ${fmt(ev.precision)}  R ${fmt(ev.recall)}  F1 ${fmt(ev.f1)}` +
        `  (tp ${ev.tp}, fp ${ev.fp}, fn ${ev.fn})`
      : null,
  };
}

const VIEW_LABELS: Record<ResultsView, string> = {
  matched: "matched",
  false_positives: "false positives",
  false_negatives: "false negatives",
};

export function renderResults(model: ResultsModel): string {
  const tabs = model.views
    .map(
      (v) =>
        `<button class="view-tab${v === model.view ? " active" : ""}" data-view="${v}">` +
        `${VIEW_LABELS[v]}</button>`,
    )
    .join("");
  const evalLine = model.evalLine
    ? `<div class="eval-line">${escapeHtml(model.evalLine)}</div>`
    : "";
  const docs = model.docs
    .map(
      (d) =>
        `<li class="doc" data-doc="${escapeHtml(d.id)}">` +
        `<span class="doc-id">${escapeHtml(d.id)}</span> ` +
        `<span class="doc-labels">[${d.labels.map(escapeHtml).join(", ")}]</span>` +
        `<p>${highlight(d.text, d.spans)}</p></li>`,
    )
    .join("");
  return (
    `<div class="results-head">${model.total} matched ${tabs}</div>` +
    evalLine +
    `<ul class="doc-list">${docs}</ul>`
  );
}

/** View state shared by the panels.
 *
 * The interactive loop only sees train and validation; scoreboard pairs are
 * accepted only when both reports carry the same ruleset revision,
 * otherwise the caller must refetch.
 */

import type {
  QueryEvalResponse,
  Report,
  RuleEntry,
  SortColumn,
  SortDirection,
} from "./types.js";

export type WorkPart = "train" | "validation";

export interface ViewState {
  selectedClass: string | null;
  activePart: WorkPart;
  sort: { column: SortColumn; dir: SortDirection };
  draftQuery: string;
  lastEval: QueryEvalResponse | null;
  rules: RuleEntry[];
  trainReport: Report | null;
  validationReport: Report | null;
  revision: number;
}

export function initialState(): ViewState {
  return {
    selectedClass: null,
    activePart: "train",
    sort: { column: "term_f1", dir: "desc" },
    draftQuery: "",
    lastEval: null,
    rules: [],
    trainReport: null,
    validationReport: null,
    revision: 0,
  };
}

export function selectClass(state: ViewState, name: string): ViewState {
  return { ...state, selectedClass: name };
}

/** Clicking a sorted column flips its direction; a new column starts desc. */
export function toggleSort(state: ViewState, column: SortColumn): ViewState {
  const dir: SortDirection =
    state.sort.column === column && state.sort.dir === "desc" ? "asc" : "desc";
  return { ...state, sort: { column, dir } };
}

/** True when a response reveals the client state is behind the server. */
export function isStale(state: ViewState, responseRevision: number): boolean {
  return responseRevision !== state.revision;
}

export interface ReportsUpdate {
  trainReport: Report;
  validationReport: Report;
  revision: number;
}

/**
 * Accept a train/validation report pair only if both were served at the
 * same revision; mixed revisions mean a mutation landed between the two
 * fetches and the pair would show inconsistent numbers.
 */
export function applyReports(
  state: ViewState,
  train: { report: Report; revision: number },
  validation: { report: Report; revision: number },
): ViewState | "stale" {
  if (train.revision !== validation.revision) {
    return "stale";
  }
  return {
    ...state,
    trainReport: train.report,
    validationReport: validation.report,
    revision: train.revision,
  };
}

/** Insert a clicked term-table n-gram into the draft query. */
export function insertTerm(draft: string, ngram: string): string {
  const literal = ngram.includes(" ") ? `"${ngram}"` : ngram;
  const trimmed = draft.trimEnd();
  if (!trimmed) {
    return literal;
  }
  if (/(\b(AND|OR|NOT)|\()$/i.test(trimmed)) {
    return `${trimmed} ${literal}`;
  }
  return `${trimmed} OR ${literal}`;
}

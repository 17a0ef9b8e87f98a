/** Browser wiring: fetch, render, delegate events.
 *
 * Single-user consistency model: at most one mutation in flight (buttons
 * disable while pending), reads refetch after every mutation, and a
 * revision mismatch between paired reports triggers one more fetch round.
 */

import { ApiError, Client, TestPartBlocked } from "./api.js";
import { caretLines, renderQueryError } from "./panels/editor.js";
import { classRows, renderClassPanel } from "./panels/classes.js";
import { confirmFinalEvaluation, FINAL_EVAL_WARNING } from "./panels/finaleval.js";
import { renderInductPreview } from "./panels/induct.js";
import { renderResults, resultsModel, ResultsView } from "./panels/results.js";
import { renderRules } from "./panels/rules.js";
import { renderScoreboard, scoreboardModel } from "./panels/scoreboard.js";
import { renderTermTable, termTableModel } from "./panels/terms.js";
import {
  applyReports,
  initialState,
  insertTerm,
  selectClass,
  toggleSort,
  ViewState,
} from "./state.js";
import type { ClassesResponse, InductResponse, SortColumn } from "./types.js";

const client = new Client("");
let state: ViewState = initialState();
let classes: ClassesResponse | null = null;
let resultsView: ResultsView = "matched";
let lastInduct: InductResponse | null = null;
let mutationPending = false;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function banner(message: string): void {
  const box = el("banner");
  box.textContent = message;
  box.classList.add("visible");
  setTimeout(() => box.classList.remove("visible"), 6000);
}

async function refreshClasses(): Promise<void> {
  classes = await client.getClasses();
  el("classes").innerHTML = renderClassPanel(
    classRows(classes.classes, state.selectedClass),
  );
}

async function refreshTerms(): Promise<void> {
  if (!state.selectedClass) {
    el("terms").innerHTML = "<p class=\"empty\">select a class</p>";
    return;
  }
  try {
    const stats = await client.getStats({
      class: state.selectedClass,
      part: state.activePart,
      sort: state.sort.column,
      dir: state.sort.dir,
      limit: 40,
    });
    el("terms").innerHTML = renderTermTable(termTableModel(stats.rows, state.sort));
  } catch (err) {
    if (err instanceof ApiError && err.code === "conflict") {
      el("terms").innerHTML = `<p class="empty">${err.message}</p>`;
    } else {
      throw err;
    }
  }
}

async function refreshRules(): Promise<void> {
  const listed = await client.getRules();
  state = { ...state, rules: listed.rules, revision: listed.revision };
  el("rules").innerHTML = renderRules(listed.rules, state.selectedClass);
}

async function refreshScoreboards(): Promise<void> {
  for (let attempt = 0; attempt < 3; attempt++) {
    const [train, validation] = await Promise.all([
      client.getReport("train"),
      client.getReport("validation"),
    ]);
    const next = applyReports(state, train, validation);
    if (next !== "stale") {
      state = next;
      el("score-train").innerHTML = renderScoreboard(scoreboardModel(train.report));
      el("score-validation").innerHTML = renderScoreboard(
        scoreboardModel(validation.report),
      );
      return;
    }
  }
  banner("scoreboards kept changing underneath us; try again");
}

async function refreshAll(): Promise<void> {
  await refreshClasses();
  await Promise.all([refreshTerms(), refreshRules(), refreshScoreboards()]);
}

async function runQuery(): Promise<void> {
  const input = el("query-input") as HTMLTextAreaElement;
  const errorBox = el("query-error");
  errorBox.innerHTML = "";
  try {
    const response = await client.evalQuery({
      query: input.value,
      part: state.activePart,
      class: state.selectedClass ?? undefined,
    });
    state = { ...state, draftQuery: input.value, lastEval: response };
    el("results").innerHTML = renderResults(resultsModel(response, resultsView));
  } catch (err) {
    if (err instanceof ApiError && err.code === "bad_query") {
      errorBox.innerHTML = renderQueryError(input.value, {
        message: err.message,
        position: err.position ?? 0,
      });
      void caretLines; // rendered inside renderQueryError
    } else if (err instanceof ApiError) {
      banner(err.message);
    } else {
      throw err;
    }
  }
}

async function mutate(action: () => Promise<unknown>): Promise<void> {
  if (mutationPending) return;
  mutationPending = true;
  document.body.classList.add("busy");
  try {
    await action();
    await refreshAll();
    if (state.lastEval) await runQuery();
  } catch (err) {
    banner(err instanceof Error ? err.message : String(err));
  } finally {
    mutationPending = false;
    document.body.classList.remove("busy");
  }
}

async function runFinalEvaluation(): Promise<void> {
  const access = confirmFinalEvaluation(window.confirm(FINAL_EVAL_WARNING));
  if (!access) return;
  try {
    const test = await client.getReport("test", access.allowTest);
    el("final-eval").innerHTML = renderScoreboard(scoreboardModel(test.report));
  } catch (err) {
    if (err instanceof TestPartBlocked) banner(err.message);
    else if (err instanceof Error) banner(err.message);
  }
}

function wire(): void {
  el("classes").addEventListener("click", (event) => {
    const row = (event.target as HTMLElement).closest<HTMLElement>("[data-class]");
    if (!row?.dataset.class) return;
    state = selectClass(state, row.dataset.class);
    void refreshClasses();
    void refreshTerms();
    void refreshRules();
  });

  el("terms").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const sortable = target.closest<HTMLElement>("[data-sort]");
    if (sortable?.dataset.sort) {
      state = toggleSort(state, sortable.dataset.sort as SortColumn);
      void refreshTerms();
      return;
    }
    const term = target.closest<HTMLElement>("[data-ngram]");
    if (term?.dataset.ngram) {
      const input = el("query-input") as HTMLTextAreaElement;
      input.value = insertTerm(input.value, term.dataset.ngram);
      state = { ...state, draftQuery: input.value };
    }
  });

  el("results").addEventListener("click", (event) => {
    const tab = (event.target as HTMLElement).closest<HTMLElement>("[data-view]");
    if (tab?.dataset.view && state.lastEval) {
      resultsView = tab.dataset.view as ResultsView;
      el("results").innerHTML = renderResults(resultsModel(state.lastEval, resultsView));
    }
  });

  el("rules").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLElement>("[data-delete]");
    if (button?.dataset.delete) {
      const id = button.dataset.delete;
      void mutate(() => client.deleteRule(id));
    }
  });

  el("run-query").addEventListener("click", () => void runQuery());
  el("save-rule").addEventListener("click", () => {
    const input = el("query-input") as HTMLTextAreaElement;
    if (!state.selectedClass) {
      banner("select a class first");
      return;
    }
    const className = state.selectedClass;
    void mutate(() => client.addRule({ class: className, query: input.value }));
  });

  el("part-toggle").addEventListener("change", (event) => {
    const value = (event.target as HTMLSelectElement).value;
    state = { ...state, activePart: value === "validation" ? "validation" : "train" };
    void refreshTerms();
  });

  el("induct-open").addEventListener("click", () => {
    if (!state.selectedClass) {
      banner("select a class first");
      return;
    }
    const className = state.selectedClass;
    void (async () => {
      try {
        lastInduct = await client.induct(className, {});
        el("induct-dialog").innerHTML = renderInductPreview(lastInduct);
      } catch (err) {
        banner(err instanceof Error ? err.message : String(err));
      }
    })();
  });

  el("induct-dialog").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.inductCancel !== undefined) {
      el("induct-dialog").innerHTML = "";
      return;
    }
    if (target.dataset.inductAccept !== undefined && lastInduct) {
      const preview = lastInduct;
      const checked = Array.from(
        el("induct-dialog").querySelectorAll<HTMLInputElement>("[data-induct-row]"),
      )
        .filter((box) => box.checked)
        .map((box) => preview.rules[Number(box.dataset.inductRow)].query);
      el("induct-dialog").innerHTML = "";
      void mutate(() => client.inductAccept(preview.class, checked, preview.seed));
    }
  });

  el("save-project").addEventListener("click", () =>
    void mutate(() => client.saveProject()),
  );
  el("final-eval-open").addEventListener("click", () => void runFinalEvaluation());
}

wire();
void refreshAll();

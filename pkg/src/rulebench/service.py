"""HTTP JSON API exposing one loaded project to the workbench UI.

Single-project server: reads are lock-free against immutable snapshots,
rule mutations and project saves serialize through one lock and bump a
revision tag the UI uses to detect staleness. The default part for every
endpoint is train; test-part requests are honored but logged.
"""

import logging
import threading
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI
from fastapi import Query as _Q
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .corpus import PARTS, Part, class_distribution, token_runs
from .evaluation import (
    empty_report,
    evaluate_class,
    evaluate_ruleset,
    misclassified,
    report_to_dict,
)
from .index import build_index
from .induct import InductParams, induce_for_class, to_query
from .query import QuerySyntaxError, eval_query_ords, parse_query, print_query, query_atoms
from .ruleset import Project, save_project
from .stats import SORT_COLUMNS, SortKey, class_term_stats, rank_terms

logger = logging.getLogger("rulebench.service")

_COLUMN_ALIASES = {"precision": "term_precision", "recall": "term_recall", "f1": "term_f1"}


class ApiError(Exception):
    def __init__(self, code: str, message: str, status: int, position: Optional[int] = None):
        self.code = code
        self.message = message
        self.status = status
        self.position = position
        super().__init__(message)


def _bad_query(message: str, position: Optional[int] = None) -> ApiError:
    return ApiError("bad_query", message, 400, position)


class ProjectState:
    """One project per process; owns the index and the mutation lock."""

    def __init__(self, project: Project, project_path: Union[str, Path]):
        if project.split is None:
            raise ValueError("project has no split assignment; run `rulebench split` first")
        self.project = project
        self.project_path = Path(project_path)
        self.index = build_index(project.corpus)
        self.revision = 0
        self.lock = threading.Lock()
        self._part_ids = {p: project.split.part_ids(p) for p in PARTS}
        self._part_ords = {p: self.index.ordinals(self._part_ids[p]) for p in PARTS}
        self._stats_cache: dict = {}

    def part_ids(self, part: Part) -> list[str]:
        return self._part_ids[part]

    def part_ordinals(self, part: Part):
        return self._part_ords[part]

    def gold_ids(self, class_name: str, part: Part) -> set[str]:
        corpus = self.project.corpus
        return {
            d for d in self._part_ids[part] if class_name in corpus.by_id[d].gold_labels
        }

    def stats_for(self, class_name: str, part: Part, max_n: int, min_df: int):
        key = (class_name, part, max_n, min_df)
        if key not in self._stats_cache:
            self._stats_cache[key] = class_term_stats(
                self.index, self.project.corpus, self.project.split, part,
                class_name, max_n, min_df,
            )
        return self._stats_cache[key]


def _parse_part(value: Optional[str]) -> Part:
    if value is None:
        return Part.TRAIN
    try:
        part = Part(value)
    except ValueError:
        raise _bad_query(f"unknown part {value!r}")
    if part is Part.TEST:
        logger.info("explicit test-part access requested")
    return part


def _require_class(state: ProjectState, name: Optional[str]) -> str:
    if not name:
        raise _bad_query("missing 'class' parameter")
    if name not in state.project.corpus.labels:
        raise ApiError("unknown_class", f"unknown class {name!r}", 404)
    return name


def _match_spans(text: str, atoms: list[tuple[str, ...]]) -> list[list[int]]:
    """Character spans where any query n-gram occurs, merged left to right."""
    runs = token_runs(text)
    tokens = [r[2] for r in runs]
    spans = []
    for atom in set(atoms):
        n = len(atom)
        for i in range(len(tokens) - n + 1):
            if tokens[i : i + n] == list(atom):
                spans.append((runs[i][0], runs[i + n - 1][1]))
    spans.sort()
    merged: list[list[int]] = []
    for start, end in spans:
        if merged and start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    return merged


class QueryEvalRequest(BaseModel):
    query: str
    part: Optional[str] = None
    class_name: Optional[str] = None
    sample_limit: int = 10

    model_config = {"populate_by_name": True}

    def __init__(self, **data):
        if "class" in data:
            data["class_name"] = data.pop("class")
        super().__init__(**data)


class AddRuleRequest(BaseModel):
    class_name: str
    query: str
    note: str = ""

    def __init__(self, **data):
        if "class" in data:
            data["class_name"] = data.pop("class")
        super().__init__(**data)


class InductRequest(BaseModel):
    class_name: str
    params: dict = {}

    def __init__(self, **data):
        if "class" in data:
            data["class_name"] = data.pop("class")
        super().__init__(**data)


class InductAcceptRequest(BaseModel):
    class_name: str
    queries: list[str]
    seed: int = 0

    def __init__(self, **data):
        if "class" in data:
            data["class_name"] = data.pop("class")
        super().__init__(**data)


def create_app(state: ProjectState, ui_dir: Optional[Union[str, Path]] = None) -> FastAPI:
    app = FastAPI(title="rulebench", docs_url=None, redoc_url=None)
    corpus = state.project.corpus

    @app.exception_handler(ApiError)
    async def _api_error(_, exc: ApiError):
        body = {"code": exc.code, "message": exc.message}
        if exc.position is not None:
            body["position"] = exc.position
        return JSONResponse(body, status_code=exc.status)

    def _doc_entry(doc_id: str, atoms=None) -> dict:
        doc = corpus.by_id[doc_id]
        entry = {"id": doc.id, "text": doc.text, "labels": list(doc.gold_labels)}
        if atoms is not None:
            entry["spans"] = _match_spans(doc.text, atoms)
        return entry

    @app.get("/api/classes")
    def get_classes():
        supports = {
            part: class_distribution(corpus, state.project.split, part) for part in PARTS
        }
        return {
            "classes": [
                {
                    "name": name,
                    "support": {part.value: supports[part][name] for part in PARTS},
                }
                for name in corpus.labels
            ],
            "revision": state.revision,
        }

    @app.get("/api/stats")
    def get_stats(
        part: Optional[str] = None,
        sort: str = "term_f1",
        dir: str = "desc",
        max_n: int = 3,
        min_df: int = 2,
        limit: int = 50,
        offset: int = 0,
        class_name: Optional[str] = _Q(default=None, alias="class"),
    ):
        name = _require_class(state, class_name)
        part_e = _parse_part(part)
        column = _COLUMN_ALIASES.get(sort, sort)
        if column not in SORT_COLUMNS:
            raise _bad_query(f"unknown sort column {sort!r}")
        if dir not in ("asc", "desc"):
            raise _bad_query(f"unknown sort direction {dir!r}")
        if not 1 <= max_n <= 3 or min_df < 1 or limit < 1 or offset < 0:
            raise _bad_query("invalid stats parameters")
        try:
            stats = state.stats_for(name, part_e, max_n, min_df)
        except ValueError as exc:
            raise ApiError("conflict", str(exc), 409)
        ranked = rank_terms(stats, SortKey(column, dir))
        page = ranked[offset : offset + limit]
        return {
            "class": name,
            "part": part_e.value,
            "sort": column,
            "dir": dir,
            "total": len(ranked),
            "rows": [
                {
                    "ngram": " ".join(s.ngram),
                    "df_in": s.df_in,
                    "df_out": s.df_out,
                    "class_size": s.class_size,
                    "universe_size": s.universe_size,
                    "term_precision": s.term_precision,
                    "term_recall": s.term_recall,
                    "term_f1": s.term_f1,
                    "lift": s.lift,
                }
                for s in page
            ],
            "revision": state.revision,
        }

    @app.post("/api/query/eval")
    def query_eval(req: QueryEvalRequest):
        part = _parse_part(req.part)
        try:
            ast = parse_query(req.query)
        except QuerySyntaxError as exc:
            raise _bad_query(exc.message, exc.position)
        uni = state.part_ordinals(part)
        matched_ords = eval_query_ords(ast, state.index, uni)
        matched = state.index.ids(matched_ords)
        atoms = query_atoms(ast)
        limit = max(0, req.sample_limit)
        out = {
            "query": print_query(ast),
            "part": part.value,
            "total_matched": len(matched),
            "matched": matched,
            "samples": {"matched": [_doc_entry(d, atoms) for d in matched[:limit]]},
            "revision": state.revision,
        }
        if req.class_name is not None:
            name = _require_class(state, req.class_name)
            gold = state.gold_ids(name, part)
            matched_set = set(matched)
            ev = evaluate_class(matched_set, gold, set(state.part_ids(part)))
            fps = sorted(matched_set - gold)
            fns = sorted(gold - matched_set)
            out["class"] = name
            out["eval"] = {
                "tp": ev.tp, "fp": ev.fp, "fn": ev.fn, "tn": ev.tn,
                "precision": ev.precision, "recall": ev.recall, "f1": ev.f1,
            }
            out["samples"]["false_positives"] = [_doc_entry(d, atoms) for d in fps[:limit]]
            out["samples"]["false_negatives"] = [_doc_entry(d, atoms) for d in fns[:limit]]
        return out

    @app.get("/api/rules")
    def get_rules():
        ruleset = state.project.ruleset
        return {
            "rules": [
                {
                    "id": r.id,
                    "class": r.class_name,
                    "query": print_query(r.query),
                    "note": r.note,
                    "created_at": r.created_at,
                }
                for r in ruleset.rules
            ],
            "class_priority": list(ruleset.class_priority),
            "revision": state.revision,
        }

    @app.post("/api/rules")
    def add_rule(req: AddRuleRequest):
        name = _require_class(state, req.class_name)
        try:
            ast = parse_query(req.query)
        except QuerySyntaxError as exc:
            raise _bad_query(exc.message, exc.position)
        with state.lock:
            rule_id = state.project.ruleset.add_rule(name, ast, req.note)
            state.revision += 1
        return {"id": rule_id, "revision": state.revision}

    @app.delete("/api/rules/{rule_id}")
    def delete_rule(rule_id: str):
        with state.lock:
            try:
                state.project.ruleset.remove_rule(rule_id)
            except KeyError:
                raise ApiError("unknown_rule", f"unknown rule id {rule_id!r}", 404)
            state.revision += 1
        return {"revision": state.revision}

    @app.get("/api/report")
    def get_report(part: Optional[str] = None):
        part_e = _parse_part(part)
        ruleset = state.project.ruleset
        if ruleset.classes_with_rules():
            report = evaluate_ruleset(
                ruleset, corpus, state.index, state.project.split, part_e
            )
        else:
            report = empty_report(corpus, state.project.split, part_e)
        return {"report": report_to_dict(report), "revision": state.revision}

    @app.get("/api/misclassified")
    def get_misclassified(
        part: Optional[str] = None,
        class_name: Optional[str] = _Q(default=None, alias="class"),
    ):
        name = _require_class(state, class_name)
        part_e = _parse_part(part)
        if name not in state.project.ruleset.classes_with_rules():
            raise ApiError("conflict", f"class {name!r} has no rules", 409)
        listing = misclassified(
            state.project.ruleset, corpus, state.index, state.project.split, name, part_e
        )
        return {
            "class": name,
            "part": part_e.value,
            "false_positives": [_doc_entry(d) for d in listing.false_positives],
            "false_negatives": [_doc_entry(d) for d in listing.false_negatives],
            "revision": state.revision,
        }

    @app.post("/api/induct")
    def induct_preview(req: InductRequest):
        name = _require_class(state, req.class_name)
        try:
            params = InductParams(**req.params)
        except TypeError as exc:
            raise _bad_query(f"bad induction parameters: {exc}")
        try:
            rules = induce_for_class(
                corpus, state.index, state.project.split, name, params
            )
        except ValueError as exc:
            raise ApiError("conflict", str(exc), 409)
        return {
            "class": name,
            "seed": params.seed,
            "rules": [
                {
                    "query": print_query(to_query([r])),
                    "precision": r.precision,
                    "recall": r.recall,
                    "f1": r.f1,
                    "literals": [
                        {"ngram": " ".join(ngram), "present": present}
                        for ngram, present in r.sorted_literals()
                    ],
                }
                for r in rules
            ],
            "revision": state.revision,
        }

    @app.post("/api/induct/accept")
    def induct_accept(req: InductAcceptRequest):
        name = _require_class(state, req.class_name)
        asts = []
        for q in req.queries:
            try:
                asts.append(parse_query(q))
            except QuerySyntaxError as exc:
                raise _bad_query(exc.message, exc.position)
        with state.lock:
            ids = [
                state.project.ruleset.add_rule(name, ast, note=f"induced(seed={req.seed})")
                for ast in asts
            ]
            state.revision += 1
        return {"ids": ids, "revision": state.revision}

    @app.post("/api/project/save")
    def project_save():
        with state.lock:
            save_project(state.project, state.project_path)
        return {"path": str(state.project_path), "revision": state.revision}

    @app.get("/api/doc/{doc_id}")
    def get_doc(doc_id: str):
        if doc_id not in corpus.by_id:
            raise ApiError("conflict", f"unknown document id {doc_id!r}", 404)
        entry = _doc_entry(doc_id)
        entry["part"] = state.project.split.assignment[doc_id].value
        entry["revision"] = state.revision
        return entry

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app

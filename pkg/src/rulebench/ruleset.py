"""Saved per-class queries, one-vs-rest classification and project files.

A class's saved rules combine by OR, so adding a rule can only widen the
class's match set. The project file stores queries as canonical printed
strings, which keeps it diffable and independent of AST internals.
"""

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable, Optional, Sequence, Union

import numpy as np

from .corpus import Corpus, Part, SplitAssignment, ingest_jsonl
from .index import InvertedIndex
from .query import Or, QueryAst, eval_query_ords, parse_query, print_query

FORMAT_VERSION = 1


class ProjectError(ValueError):
    """Base for project-file problems."""


class UnknownVersionError(ProjectError):
    pass


class HashMismatchError(ProjectError):
    pass


class StoredQueryError(ProjectError):
    pass


@dataclass(frozen=True)
class Rule:
    id: str
    class_name: str
    query: QueryAst
    note: str = ""
    created_at: str = ""


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class RuleSet:
    """Ordered rule list; mutations swap an immutable tuple so readers always
    see a consistent snapshot."""

    def __init__(self, labels: Iterable[str]):
        self.labels = tuple(labels)
        self.rules: tuple[Rule, ...] = ()
        self.class_priority: list[str] = []

    def add_rule(self, class_name: str, query: QueryAst, note: str = "") -> str:
        if class_name not in self.labels:
            raise KeyError(f"unknown class {class_name!r}")
        existing = {r.id for r in self.rules}
        n = len(self.rules) + 1
        while f"r{n}" in existing:
            n += 1
        rule = Rule(f"r{n}", class_name, query, note, _now())
        self.rules = self.rules + (rule,)
        if class_name not in self.class_priority:
            self.class_priority.append(class_name)
        return rule.id

    def remove_rule(self, rule_id: str) -> None:
        kept = tuple(r for r in self.rules if r.id != rule_id)
        if len(kept) == len(self.rules):
            raise KeyError(f"unknown rule id {rule_id!r}")
        removed_class = next(r.class_name for r in self.rules if r.id == rule_id)
        self.rules = kept
        if not any(r.class_name == removed_class for r in kept):
            self.class_priority.remove(removed_class)

    def list_rules(self, class_name: Optional[str] = None) -> list[Rule]:
        if class_name is None:
            return list(self.rules)
        if class_name not in self.labels:
            raise KeyError(f"unknown class {class_name!r}")
        return [r for r in self.rules if r.class_name == class_name]

    def classes_with_rules(self) -> list[str]:
        seen: dict[str, None] = {}
        for r in self.rules:
            seen.setdefault(r.class_name)
        return list(seen)

    def effective_query(self, class_name: str) -> QueryAst:
        """OR-fold of the class's rules in insertion order."""
        rules = self.list_rules(class_name)
        if not rules:
            raise KeyError(f"class {class_name!r} has no rules")
        return _fold_or(rules)


def _fold_or(rules: Sequence[Rule]) -> QueryAst:
    ast = rules[0].query
    for rule in rules[1:]:
        ast = Or(ast, rule.query)
    return ast


def _rules_by_class(rules: Sequence[Rule]) -> dict[str, list[Rule]]:
    grouped: dict[str, list[Rule]] = {}
    for rule in rules:
        grouped.setdefault(rule.class_name, []).append(rule)
    return grouped


def classify(
    ruleset: RuleSet, index: InvertedIndex, universe: Iterable[str]
) -> dict[str, set[str]]:
    """Per-class match sets over the universe (one-vs-rest; sets may overlap
    and documents may match no class at all). Reads one consistent snapshot
    of the rule list."""
    uni = universe if isinstance(universe, np.ndarray) else index.ordinals(universe)
    out = {}
    for class_name, rules in _rules_by_class(ruleset.rules).items():
        ords = eval_query_ords(_fold_or(rules), index, uni)
        out[class_name] = set(index.ids(ords))
    return out


def predict_single_label(
    ruleset: RuleSet, index: InvertedIndex, doc_id: str
) -> Optional[str]:
    """First class in priority order whose effective query matches the doc."""
    uni = index.ordinals([doc_id])
    grouped = _rules_by_class(ruleset.rules)
    for class_name in list(ruleset.class_priority):
        rules = grouped.get(class_name)
        if rules and len(eval_query_ords(_fold_or(rules), index, uni)):
            return class_name
    return None


@dataclass
class Project:
    corpus_path: str
    corpus_sha256: str
    corpus: Corpus
    ruleset: RuleSet
    split: Optional[SplitAssignment] = None
    format_version: int = FORMAT_VERSION


def sha256_file(path: Union[str, Path]) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def new_project(corpus_path: Union[str, Path], corpus: Optional[Corpus] = None) -> Project:
    corpus = corpus if corpus is not None else ingest_jsonl(corpus_path)
    return Project(
        corpus_path=str(corpus_path),
        corpus_sha256=sha256_file(corpus_path),
        corpus=corpus,
        ruleset=RuleSet(corpus.labels),
    )


def project_to_dict(project: Project) -> dict:
    split = None
    if project.split is not None:
        split = {
            "seed": project.split.seed,
            "ratios": list(project.split.ratios),
            "assignment": {d: p.value for d, p in project.split.assignment.items()},
        }
    return {
        "format_version": project.format_version,
        "corpus": {"path": project.corpus_path, "sha256": project.corpus_sha256},
        "split": split,
        "rules": [
            {
                "id": r.id,
                "class": r.class_name,
                "query": print_query(r.query),
                "note": r.note,
                "created_at": r.created_at,
            }
            for r in project.ruleset.rules
        ],
        "class_priority": list(project.ruleset.class_priority),
    }


def save_project(project: Project, sink: Union[str, Path, IO[str]]) -> None:
    payload = json.dumps(project_to_dict(project), indent=2, ensure_ascii=False) + "\n"
    if hasattr(sink, "write"):
        sink.write(payload)
    else:
        Path(sink).write_text(payload, encoding="utf-8")


def load_project(source: Union[str, Path]) -> Project:
    """Load a project file, re-ingest its corpus and verify the content hash."""
    path = Path(source)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ProjectError(f"not a valid project file: {exc}") from exc
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise UnknownVersionError(f"unknown format_version {version!r}")

    corpus_path = Path(obj["corpus"]["path"])
    if not corpus_path.is_absolute():
        corpus_path = path.parent / corpus_path
    actual = sha256_file(corpus_path)
    if actual != obj["corpus"]["sha256"]:
        raise HashMismatchError(
            f"corpus hash mismatch for {corpus_path}: "
            f"expected {obj['corpus']['sha256']}, found {actual}"
        )
    corpus = ingest_jsonl(corpus_path)

    ruleset = RuleSet(corpus.labels)
    rules = []
    for entry in obj.get("rules", []):
        try:
            ast = parse_query(entry["query"])
        except ValueError as exc:
            raise StoredQueryError(
                f"rule {entry.get('id')!r}: stored query does not parse: {exc}"
            ) from exc
        if entry["class"] not in corpus.labels:
            raise ProjectError(f"rule {entry.get('id')!r}: unknown class {entry['class']!r}")
        rules.append(
            Rule(entry["id"], entry["class"], ast, entry.get("note", ""), entry.get("created_at", ""))
        )
    ruleset.rules = tuple(rules)
    priority = list(obj.get("class_priority", []))
    if sorted(priority) != sorted({r.class_name for r in rules}):
        raise ProjectError("class_priority must list exactly the classes that have rules")
    ruleset.class_priority = priority

    split = None
    if obj.get("split") is not None:
        s = obj["split"]
        try:
            assignment = {d: Part(p) for d, p in s["assignment"].items()}
        except ValueError as exc:
            raise ProjectError(f"bad split assignment: {exc}") from exc
        if set(assignment) != set(corpus.by_id):
            raise ProjectError("split assignment does not cover the corpus exactly")
        # keep assignment in corpus order regardless of file order
        assignment = {doc.id: assignment[doc.id] for doc in corpus}
        split = SplitAssignment(
            assignment=assignment, seed=int(s["seed"]), ratios=tuple(s["ratios"])
        )

    return Project(
        corpus_path=obj["corpus"]["path"],
        corpus_sha256=obj["corpus"]["sha256"],
        corpus=corpus,
        ruleset=ruleset,
        split=split,
        format_version=version,
    )

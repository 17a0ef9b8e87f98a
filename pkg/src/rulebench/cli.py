"""Command-line entry points: ingest, split, stats, eval-query,
eval-ruleset, induct and serve.

Exit codes: 0 success, 1 usage error (including query syntax errors),
2 malformed corpus/project data, 3 unmet evaluation preconditions.
"""

import argparse
import json
import sys
from typing import Optional

from .corpus import IngestError, Part, split_corpus
from .evaluation import (
    evaluate_class,
    evaluate_ruleset,
    format_report_table,
    report_to_json,
)
from .index import build_index
from .induct import InductParams, induce_for_class, to_query
from .query import QuerySyntaxError, eval_query, parse_query, print_query
from .ruleset import ProjectError, load_project, new_project, save_project
from .stats import SORT_COLUMNS, SortKey, class_term_stats, rank_terms

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_EVAL = 3

_SORT_ALIASES = {"precision": "term_precision", "recall": "term_recall", "f1": "term_f1"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems with exit code 1."""

    def error(self, message):
        raise _UsageError(message)


def _ratios(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated fractions")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not numeric: {text!r}")
    if any(v < 0 for v in vals) or abs(sum(vals) - 1.0) > 1e-9:
        raise argparse.ArgumentTypeError("fractions must be non-negative and sum to 1")
    return vals


def _part(text: str) -> Part:
    try:
        return Part(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown part {text!r} (expected train, validation or test)"
        )


def _sort_column(text: str) -> str:
    column = _SORT_ALIASES.get(text, text)
    if column not in SORT_COLUMNS:
        raise argparse.ArgumentTypeError(f"unknown sort column {text!r}")
    return column


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rulebench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="create a project from a JSONL corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("split", help="assign train/validation/test parts")
    p.add_argument("--project", required=True)
    p.add_argument("--ratios", type=_ratios, default=(0.2, 0.1, 0.7))
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("stats", help="term statistics table for a class (TSV)")
    p.add_argument("--project", required=True)
    p.add_argument("--class", dest="class_name", required=True)
    p.add_argument("--part", type=_part, default=Part.TRAIN)
    p.add_argument("--sort", type=_sort_column, default="term_f1")
    p.add_argument("--dir", choices=("asc", "desc"), default="desc")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--min-df", type=int, default=2)
    p.add_argument("--limit", type=int, default=50)

    p = sub.add_parser("eval-query", help="evaluate one query against a class")
    p.add_argument("--project", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--class", dest="class_name", required=True)
    p.add_argument("--part", type=_part, default=Part.TRAIN)

    p = sub.add_parser("eval-ruleset", help="score all saved rules on a part")
    p.add_argument("--project", required=True)
    p.add_argument("--part", type=_part, default=Part.TEST)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("induct", help="induce rules for a class from trees")
    p.add_argument("--project", required=True)
    p.add_argument("--class", dest="class_name", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--min-df", type=int, default=2)
    p.add_argument("--max-features", type=int, default=1000)
    p.add_argument("--n-trees", type=int, default=30)
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--min-leaf", type=int, default=5)
    p.add_argument("--min-precision", type=float, default=0.5)
    p.add_argument("--min-recall", type=float, default=0.05)
    p.add_argument("--max-rules", type=int, default=16)
    p.add_argument("--accept", action="store_true", help="save induced rules into the project")

    p = sub.add_parser("serve", help="serve the HTTP API for the workbench UI")
    p.add_argument("--project", required=True)
    p.add_argument("--addr", default="127.0.0.1:8731")
    p.add_argument("--ui-dir", default=None)

    return parser


def _require_split(project):
    if project.split is None:
        raise ValueError("project has no split assignment; run `rulebench split` first")
    return project.split


def cmd_ingest(args) -> int:
    project = new_project(args.corpus)
    save_project(project, args.out)
    print(
        f"ingested {len(project.corpus)} documents, "
        f"{len(project.corpus.labels.names)} classes -> {args.out}"
    )
    return EXIT_OK


def cmd_split(args) -> int:
    project = load_project(args.project)
    project.split = split_corpus(project.corpus, args.ratios, args.seed)
    save_project(project, args.project)
    sizes = project.split.sizes()
    print(
        f"train={sizes[Part.TRAIN]} validation={sizes[Part.VALIDATION]} "
        f"test={sizes[Part.TEST]}"
    )
    return EXIT_OK


def cmd_stats(args) -> int:
    project = load_project(args.project)
    split = _require_split(project)
    index = build_index(project.corpus)
    stats = class_term_stats(
        index, project.corpus, split, args.part, args.class_name, args.max_n, args.min_df
    )
    ranked = rank_terms(stats, SortKey(args.sort, args.dir), args.limit)
    print(
        "ngram\tdf_in\tdf_out\tclass_size\tuniverse_size\t"
        "term_precision\tterm_recall\tterm_f1\tlift"
    )
    for s in ranked:
        print(
            f"{' '.join(s.ngram)}\t{s.df_in}\t{s.df_out}\t{s.class_size}\t"
            f"{s.universe_size}\t{s.term_precision:.6f}\t{s.term_recall:.6f}\t"
            f"{s.term_f1:.6f}\t{s.lift:.6f}"
        )
    return EXIT_OK


def cmd_eval_query(args) -> int:
    project = load_project(args.project)
    split = _require_split(project)
    if args.class_name not in project.corpus.labels:
        raise ValueError(f"unknown class {args.class_name!r}")
    ast = parse_query(args.query)
    index = build_index(project.corpus)
    part_ids = split.part_ids(args.part)
    if not part_ids:
        raise ValueError(f"split part {args.part.value!r} is empty")
    matched = eval_query(ast, index, part_ids)
    gold = {
        d for d in part_ids if args.class_name in project.corpus.by_id[d].gold_labels
    }
    ev = evaluate_class(matched, gold, set(part_ids))
    print(
        json.dumps(
            {
                "query": print_query(ast),
                "class": args.class_name,
                "part": args.part.value,
                "tp": ev.tp, "fp": ev.fp, "fn": ev.fn, "tn": ev.tn,
                "precision": ev.precision, "recall": ev.recall, "f1": ev.f1,
            },
            indent=2,
        )
    )
    return EXIT_OK


def cmd_eval_ruleset(args) -> int:
    project = load_project(args.project)
    split = _require_split(project)
    index = build_index(project.corpus)
    report = evaluate_ruleset(project.ruleset, project.corpus, index, split, args.part)
    print(report_to_json(report) if args.json else format_report_table(report))
    return EXIT_OK


def cmd_induct(args) -> int:
    project = load_project(args.project)
    split = _require_split(project)
    index = build_index(project.corpus)
    params = InductParams(
        max_n=args.max_n,
        min_df=args.min_df,
        max_features=args.max_features,
        n_trees=args.n_trees,
        max_depth=args.max_depth,
        min_leaf=args.min_leaf,
        min_precision=args.min_precision,
        min_recall=args.min_recall,
        max_rules=args.max_rules,
        seed=args.seed,
    )
    rules = induce_for_class(project.corpus, index, split, args.class_name, params)
    print("precision\trecall\tf1\tquery")
    for rule in rules:
        print(
            f"{rule.precision:.6f}\t{rule.recall:.6f}\t{rule.f1:.6f}\t"
            f"{print_query(to_query([rule]))}"
        )
    if args.accept:
        ids = [
            project.ruleset.add_rule(
                args.class_name, to_query([rule]), note=f"induced(seed={params.seed})"
            )
            for rule in rules
        ]
        save_project(project, args.project)
        print(f"accepted {len(ids)} rules: {' '.join(ids)}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ProjectState, create_app

    host, _, port = args.addr.rpartition(":")
    if not host or not port.isdigit():
        raise _UsageError(f"bad --addr {args.addr!r} (expected host:port)")
    project = load_project(args.project)
    state = ProjectState(project, args.project)
    app = create_app(state, ui_dir=args.ui_dir)
    uvicorn.run(app, host=host, port=int(port))
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "split": cmd_split,
    "stats": cmd_stats,
    "eval-query": cmd_eval_query,
    "eval-ruleset": cmd_eval_ruleset,
    "induct": cmd_induct,
    "serve": cmd_serve,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuerySyntaxError as exc:
        print(f"query syntax error at position {exc.position}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except (IngestError, ProjectError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, KeyError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())

"""Precision/recall/F1 scoring of rule sets against a split part.

Zero denominators score 0 (an empty predictor earns nothing), and classes
without rules are excluded from the aggregates but listed explicitly, so a
half-built project still reports meaningful numbers.
"""

import json
from dataclasses import dataclass
from typing import NamedTuple

from .corpus import Corpus, Part, SplitAssignment
from .index import InvertedIndex
from .ruleset import RuleSet, classify


@dataclass(frozen=True)
class BinaryEval:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int, tn: int) -> "BinaryEval":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        return cls(tp, fp, fn, tn, precision, recall, f1)


class Scores(NamedTuple):
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    part: Part
    per_class: dict[str, BinaryEval]
    overall: Scores
    overall_w: Scores
    support: dict[str, int]
    excluded_classes: tuple[str, ...]


@dataclass(frozen=True)
class MisclassifiedListing:
    class_name: str
    false_positives: tuple[str, ...]  # predicted but not gold, sorted by id
    false_negatives: tuple[str, ...]  # gold but not predicted, sorted by id


def evaluate_class(predicted: set, gold: set, universe: set) -> BinaryEval:
    if not universe:
        raise ValueError("empty evaluation universe")
    if not predicted <= universe or not gold <= universe:
        raise ValueError("predicted and gold sets must lie within the universe")
    tp = len(predicted & gold)
    fp = len(predicted - gold)
    fn = len(gold - predicted)
    tn = len(universe) - tp - fp - fn
    return BinaryEval.from_counts(tp, fp, fn, tn)


def _gold_ids(corpus: Corpus, part_ids: list[str], class_name: str) -> set[str]:
    return {d for d in part_ids if class_name in corpus.by_id[d].gold_labels}


def evaluate_ruleset(
    ruleset: RuleSet,
    corpus: Corpus,
    index: InvertedIndex,
    split: SplitAssignment,
    part: Part,
) -> EvalReport:
    """Score every rule-bearing class one-vs-rest over the part, plus the
    unweighted (overall) and gold-support-weighted (overall-w) averages."""
    part_ids = split.part_ids(part)
    if not part_ids:
        raise ValueError(f"split part {part.value!r} is empty")
    universe = set(part_ids)
    predictions = classify(ruleset, index, index.ordinals(part_ids))
    scored_classes = list(predictions)  # classify snapshots the rule list once
    if not scored_classes:
        raise ValueError("ruleset has no rules")

    per_class = {}
    support = {
        name: len(_gold_ids(corpus, part_ids, name)) for name in corpus.labels
    }
    for name in scored_classes:
        gold = _gold_ids(corpus, part_ids, name)
        per_class[name] = evaluate_class(predictions[name], gold, universe)

    n = len(scored_classes)
    overall = Scores(
        sum(per_class[c].precision for c in scored_classes) / n,
        sum(per_class[c].recall for c in scored_classes) / n,
        sum(per_class[c].f1 for c in scored_classes) / n,
    )
    total_support = sum(support[c] for c in scored_classes)
    if total_support:
        overall_w = Scores(
            sum(per_class[c].precision * support[c] for c in scored_classes) / total_support,
            sum(per_class[c].recall * support[c] for c in scored_classes) / total_support,
            sum(per_class[c].f1 * support[c] for c in scored_classes) / total_support,
        )
    else:
        overall_w = Scores(0.0, 0.0, 0.0)

    excluded = tuple(name for name in corpus.labels if name not in per_class)
    return EvalReport(part, per_class, overall, overall_w, support, excluded)


def empty_report(corpus: Corpus, split: SplitAssignment, part: Part) -> EvalReport:
    """Report for a project with no rules yet: nothing scored, every class
    listed as excluded."""
    part_ids = split.part_ids(part)
    support = {name: len(_gold_ids(corpus, part_ids, name)) for name in corpus.labels}
    zero = Scores(0.0, 0.0, 0.0)
    return EvalReport(part, {}, zero, zero, support, tuple(corpus.labels))


def misclassified(
    ruleset: RuleSet,
    corpus: Corpus,
    index: InvertedIndex,
    split: SplitAssignment,
    class_name: str,
    part: Part,
) -> MisclassifiedListing:
    part_ids = split.part_ids(part)
    if not part_ids:
        raise ValueError(f"split part {part.value!r} is empty")
    predictions = classify(ruleset, index, index.ordinals(part_ids))
    if class_name not in predictions:
        raise KeyError(f"class {class_name!r} has no rules")
    predicted = predictions[class_name]
    gold = _gold_ids(corpus, part_ids, class_name)
    return MisclassifiedListing(
        class_name=class_name,
        false_positives=tuple(sorted(predicted - gold)),
        false_negatives=tuple(sorted(gold - predicted)),
    )


# --- serialization -----------------------------------------------------------


def report_to_dict(report: EvalReport) -> dict:
    return {
        "part": report.part.value,
        "per_class": {
            name: {
                "tp": ev.tp,
                "fp": ev.fp,
                "fn": ev.fn,
                "tn": ev.tn,
                "precision": ev.precision,
                "recall": ev.recall,
                "f1": ev.f1,
            }
            for name, ev in report.per_class.items()
        },
        "overall": report.overall._asdict(),
        "overall_w": report.overall_w._asdict(),
        "support": dict(report.support),
        "excluded_classes": list(report.excluded_classes),
    }


def report_from_dict(obj: dict) -> EvalReport:
    per_class = {
        name: BinaryEval(
            ev["tp"], ev["fp"], ev["fn"], ev["tn"],
            ev["precision"], ev["recall"], ev["f1"],
        )
        for name, ev in obj["per_class"].items()
    }
    return EvalReport(
        part=Part(obj["part"]),
        per_class=per_class,
        overall=Scores(**obj["overall"]),
        overall_w=Scores(**obj["overall_w"]),
        support=dict(obj["support"]),
        excluded_classes=tuple(obj["excluded_classes"]),
    )


def report_to_json(report: EvalReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, ensure_ascii=False)


def format_report_table(report: EvalReport) -> str:
    """Fixed-width text table: one row per scored class, then the overall
    and support-weighted rows."""
    width = max([len("overall-w")] + [len(c) for c in report.per_class])
    lines = [f"part: {report.part.value}"]
    lines.append(f"{'class':<{width}}      P      R     F1  support")
    for name, ev in report.per_class.items():
        lines.append(
            f"{name:<{width}}  {ev.precision:5.3f}  {ev.recall:5.3f}  {ev.f1:5.3f}  "
            f"{report.support[name]:7d}"
        )
    o, w = report.overall, report.overall_w
    lines.append(f"{'overall':<{width}}  {o.precision:5.3f}  {o.recall:5.3f}  {o.f1:5.3f}")
    lines.append(f"{'overall-w':<{width}}  {w.precision:5.3f}  {w.recall:5.3f}  {w.f1:5.3f}")
    if report.excluded_classes:
        lines.append("excluded (no rules): " + ", ".join(report.excluded_classes))
    return "\n".join(lines)

"""Labeled text corpus: tokenization, JSONL ingestion and split assignment."""

import json
import random
import re
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable, Iterator, Sequence

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class IngestError(ValueError):
    """Raised when a JSONL corpus line cannot be accepted."""


def tokenize(text: str) -> list[str]:
    """Lowercase the text and return its maximal letter/digit runs, in order.

    Every other character acts as a separator; there is no stemming and no
    stop-word removal, so tokens like "2d" or "9th" survive intact.
    """
    return _TOKEN_RE.findall(text.lower())


def token_runs(text: str) -> list[tuple[int, int, str]]:
    """(start, end, lowercased token) for each token run of the raw text,
    for mapping tokens back to character spans."""
    return [(m.start(), m.end(), m.group().lower()) for m in _TOKEN_RE.finditer(text)]


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    tokens: tuple[str, ...]
    gold_labels: tuple[str, ...]  # deduplicated, input order preserved

    @classmethod
    def make(cls, doc_id: str, text: str, labels: Sequence[str]) -> "Document":
        if not labels:
            raise ValueError(f"document {doc_id!r} has no labels")
        seen: dict[str, None] = {}
        for lab in labels:
            if not isinstance(lab, str) or not lab:
                raise ValueError(f"document {doc_id!r} has a non-string or empty label")
            seen.setdefault(lab)
        return cls(doc_id, text, tuple(tokenize(text)), tuple(seen))

    @property
    def primary_label(self) -> str:
        return self.gold_labels[0]


@dataclass(frozen=True)
class LabelSet:
    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise ValueError("label set is empty")
        if len(set(self.names)) != len(self.names):
            raise ValueError("label set contains duplicates")

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)


class Corpus:
    """Immutable collection of documents with a stable label order."""

    def __init__(self, docs: Sequence[Document]):
        if not docs:
            raise ValueError("corpus is empty")
        by_id: dict[str, Document] = {}
        label_order: dict[str, None] = {}
        for doc in docs:
            if doc.id in by_id:
                raise ValueError(f"duplicate document id {doc.id!r}")
            by_id[doc.id] = doc
            for lab in doc.gold_labels:
                label_order.setdefault(lab)
        self.docs: tuple[Document, ...] = tuple(docs)
        self.by_id = by_id
        self.labels = LabelSet(tuple(label_order))

    @classmethod
    def from_records(cls, records: Iterable[tuple[str, str, Sequence[str]]]) -> "Corpus":
        return cls([Document.make(i, t, ls) for i, t, ls in records])

    def __len__(self) -> int:
        return len(self.docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.docs)

    def __getitem__(self, doc_id: str) -> Document:
        return self.by_id[doc_id]


def ingest_jsonl(source) -> Corpus:
    """Read a corpus from JSONL (one {id, text, labels} object per line).

    Rejections name the offending line number, or the id for duplicates.
    Accepts a path, an open text file, or an iterable of lines.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8") as fh:
            return ingest_jsonl(fh)
    docs = []
    seen = set()
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
        if not isinstance(obj, dict):
            raise IngestError(f"line {lineno}: expected a JSON object")
        for field in ("id", "text", "labels"):
            if field not in obj:
                raise IngestError(f"line {lineno}: missing field {field!r}")
        doc_id, text, labels = obj["id"], obj["text"], obj["labels"]
        if not isinstance(doc_id, str) or not doc_id:
            raise IngestError(f"line {lineno}: 'id' must be a non-empty string")
        if not isinstance(text, str):
            raise IngestError(f"line {lineno}: 'text' must be a string")
        if not isinstance(labels, list) or not labels:
            raise IngestError(f"line {lineno}: 'labels' must be a non-empty array")
        if doc_id in seen:
            raise IngestError(f"duplicate document id {doc_id!r}")
        seen.add(doc_id)
        try:
            docs.append(Document.make(doc_id, text, labels))
        except ValueError as exc:
            raise IngestError(f"line {lineno}: {exc}") from exc
    if not docs:
        raise IngestError("corpus contains no documents")
    return Corpus(docs)


def write_jsonl(corpus: Corpus, sink: IO[str]) -> None:
    for doc in corpus:
        obj = {"id": doc.id, "text": doc.text, "labels": list(doc.gold_labels)}
        sink.write(json.dumps(obj, ensure_ascii=False) + "\n")


class Part(str, Enum):
    TRAIN = "train"
    VALIDATION = "validation"
    TEST = "test"


PARTS = (Part.TRAIN, Part.VALIDATION, Part.TEST)


@dataclass(frozen=True)
class SplitAssignment:
    assignment: dict[str, Part]  # corpus order
    seed: int
    ratios: tuple[float, float, float]

    def part_ids(self, part: Part) -> list[str]:
        return [doc_id for doc_id, p in self.assignment.items() if p is part]

    def sizes(self) -> dict[Part, int]:
        out = {p: 0 for p in PARTS}
        for p in self.assignment.values():
            out[p] += 1
        return out


def largest_remainder(total: int, ratios: Sequence[float]) -> list[int]:
    """Apportion `total` seats by ratio; leftovers go to the largest fractions
    (ties to the earlier part)."""
    quotas = [total * r for r in ratios]
    floors = [int(q) for q in quotas]
    leftover = total - sum(floors)
    order = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - floors[i]), i))
    for i in order[:leftover]:
        floors[i] += 1
    return floors


def _assign_leftover_seats(group_labels, fracs, seats, capacity):
    """Give each group its leftover seats, one per part, only on parts with a
    positive fractional remainder, without exceeding the global capacities.

    Greedy by remainder first; stranded seats are repaired with augmenting
    paths (a feasible assignment always exists because every group/part
    cell may hold either its floor or its ceiling).
    """
    order = {lab: k for k, lab in enumerate(group_labels)}
    extras: dict[str, set[int]] = {lab: set() for lab in group_labels}
    remaining = dict(seats)
    edges = sorted(
        ((lab, p) for lab in group_labels for p in range(3) if fracs[lab][p] > 1e-12),
        key=lambda e: (-fracs[e[0]][e[1]], order[e[0]], e[1]),
    )
    for lab, p in edges:
        if remaining[lab] and capacity[p] and p not in extras[lab]:
            extras[lab].add(p)
            remaining[lab] -= 1
            capacity[p] -= 1

    def augment(start: str) -> None:
        # alternating BFS: unused allowed edge group->part, used edge part->group
        reached_via: dict[int, str] = {}  # part -> group that would add it
        parent_part: dict[str, int] = {}  # group -> part it would give up
        seen_groups = {start}
        queue = [start]
        while queue:
            lab = queue.pop(0)
            for p in range(3):
                if p in reached_via or fracs[lab][p] <= 1e-12 or p in extras[lab]:
                    continue
                reached_via[p] = lab
                if capacity[p]:
                    capacity[p] -= 1
                    group, part = lab, p
                    while True:
                        extras[group].add(part)
                        given_up = parent_part.get(group)
                        if given_up is None:
                            return
                        extras[group].discard(given_up)
                        group, part = reached_via[given_up], given_up
                for other in group_labels:
                    if other not in seen_groups and p in extras[other]:
                        seen_groups.add(other)
                        parent_part[other] = p
                        queue.append(other)
        raise RuntimeError("stratified split: no feasible seat assignment")

    for lab in group_labels:
        while remaining[lab]:
            augment(lab)
            remaining[lab] -= 1
    return extras


def split_corpus(corpus: Corpus, ratios: Sequence[float], seed: int) -> SplitAssignment:
    """Stratified train/validation/test assignment.

    Documents are grouped by primary gold label, shuffled per group with a
    PRNG derived from (seed, label), and apportioned so the global part
    sizes equal the largest-remainder rounding of the ratios while every
    label group stays within one document of its own proportional share.
    """
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r < 0 for r in ratios):
        raise ValueError("ratios must be three non-negative fractions")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios sum to {sum(ratios)}, expected 1")
    if len(corpus) == 0:
        raise ValueError("corpus is empty")

    groups: dict[str, list[Document]] = {}
    for doc in corpus:
        groups.setdefault(doc.primary_label, []).append(doc)
    group_labels = [lab for lab in corpus.labels if lab in groups]

    targets = largest_remainder(len(corpus), ratios)
    floors: dict[str, list[int]] = {}
    fracs: dict[str, list[float]] = {}
    seats: dict[str, int] = {}
    capacity = list(targets)
    for lab in group_labels:
        g = len(groups[lab])
        floors[lab] = [int(g * r) for r in ratios]
        fracs[lab] = [g * ratios[p] - floors[lab][p] for p in range(3)]
        seats[lab] = g - sum(floors[lab])
        for p in range(3):
            capacity[p] -= floors[lab][p]
    extras = _assign_leftover_seats(group_labels, fracs, seats, capacity)
    alloc = {
        lab: [floors[lab][p] + (p in extras[lab]) for p in range(3)]
        for lab in group_labels
    }

    part_of: dict[str, Part] = {}
    for lab in group_labels:
        docs = list(groups[lab])
        random.Random(f"{seed}:{lab}").shuffle(docs)
        a_train, a_val, _ = alloc[lab]
        for k, doc in enumerate(docs):
            if k < a_train:
                part_of[doc.id] = Part.TRAIN
            elif k < a_train + a_val:
                part_of[doc.id] = Part.VALIDATION
            else:
                part_of[doc.id] = Part.TEST

    assignment = {doc.id: part_of[doc.id] for doc in corpus}
    return SplitAssignment(assignment=assignment, seed=seed, ratios=ratios)


def class_distribution(corpus: Corpus, split: SplitAssignment, part: Part) -> dict[str, int]:
    """Documents per class within a split part (multi-label docs count once
    per class they carry)."""
    counts = {name: 0 for name in corpus.labels}
    for doc_id, p in split.assignment.items():
        if p is part:
            for lab in corpus.by_id[doc_id].gold_labels:
                counts[lab] += 1
    return counts

"""Per-class n-gram statistics behind the sortable term-suggestion table.

The column set (document frequencies, one-term precision/recall/F1 and a
smoothed lift) is a reconstruction: it gives the "is this word a strong
indicator of the class" signal the rule-building workflow runs on.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .corpus import Corpus, Part, SplitAssignment
from .index import InvertedIndex, ngram_class_frequencies


class TermStats(NamedTuple):
    ngram: tuple[str, ...]
    df_in: int
    df_out: int
    class_size: int
    universe_size: int
    term_precision: float
    term_recall: float
    term_f1: float
    lift: float


SORT_COLUMNS = ("df_in", "df_out", "term_precision", "term_recall", "term_f1", "lift")


@dataclass(frozen=True)
class SortKey:
    column: str
    direction: str = "desc"

    def __post_init__(self):
        if self.column not in SORT_COLUMNS:
            raise ValueError(f"unknown sort column {self.column!r}")
        if self.direction not in ("asc", "desc"):
            raise ValueError(f"direction must be 'asc' or 'desc', got {self.direction!r}")


def class_term_stats(
    index: InvertedIndex,
    corpus: Corpus,
    split: SplitAssignment,
    part: Part,
    class_name: str,
    max_n: int = 3,
    min_df: int = 2,
) -> list[TermStats]:
    """One TermStats per n-gram with df >= min_df over the part, treating
    "document contains the n-gram" as a one-term classifier for the class."""
    if class_name not in corpus.labels:
        raise ValueError(f"unknown class {class_name!r}")
    part_ids = split.part_ids(part)
    if not part_ids:
        raise ValueError(f"split part {part.value!r} is empty")
    universe = index.ordinals(part_ids)
    in_class = np.zeros(len(universe), dtype=np.uint8)
    class_ords = index.ordinals(
        d for d in part_ids if class_name in corpus.by_id[d].gold_labels
    )
    in_class[np.searchsorted(universe, class_ords)] = 1
    class_size = int(in_class.sum())
    if class_size == 0:
        raise ValueError(f"class {class_name!r} has no documents in part {part.value!r}")
    universe_size = len(universe)

    out = []
    for ngram, df, df_in in ngram_class_frequencies(index, universe, in_class, max_n, min_df):
        df_out = df - df_in
        precision = df_in / df
        recall = df_in / class_size
        f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
        lift = ((df_in + 1) / (class_size + 1)) / ((df + 1) / (universe_size + 1))
        out.append(
            TermStats(ngram, df_in, df_out, class_size, universe_size, precision, recall, f1, lift)
        )
    return out


def rank_terms(
    stats: Sequence[TermStats], sort_key: SortKey, limit: Optional[int] = None
) -> list[TermStats]:
    """Sort by the requested column; ties break by df_in descending then
    n-gram lexicographic, so the ordering is reproducible."""
    if limit is not None and limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    sign = 1 if sort_key.direction == "asc" else -1
    ranked = sorted(
        stats,
        key=lambda s: (sign * getattr(s, sort_key.column), -s.df_in, s.ngram),
    )
    return ranked[:limit] if limit is not None else ranked

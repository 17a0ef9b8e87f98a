"""rulebench: build, score and induce Boolean text-classification rules."""

from .corpus import (
    Corpus,
    Document,
    LabelSet,
    Part,
    SplitAssignment,
    class_distribution,
    ingest_jsonl,
    split_corpus,
    tokenize,
)
from .evaluation import (
    BinaryEval,
    EvalReport,
    evaluate_class,
    evaluate_ruleset,
    misclassified,
)
from .index import InvertedIndex, build_index, match_ngram, vocabulary
from .induct import InductParams, induce_for_class, to_query
from .query import (
    And,
    Not,
    Or,
    Phrase,
    QuerySyntaxError,
    Term,
    eval_query,
    parse_query,
    print_query,
)
from .ruleset import (
    Project,
    Rule,
    RuleSet,
    classify,
    load_project,
    new_project,
    predict_single_label,
    save_project,
)
from .stats import SortKey, TermStats, class_term_stats, rank_terms

__version__ = "0.1.0"

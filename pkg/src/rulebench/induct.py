"""Rule induction from a bagged ensemble of shallow decision trees.

Binary n-gram presence features, greedy Gini splits over a random
sqrt-sized candidate subset per node, and conversion of high-purity
root-to-leaf paths into conjunctive match/filter rules. Candidate rules
are scored on out-of-bag docs, then re-scored and pruned on the
validation part before becoming ordinary saved queries.
"""

import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .corpus import Corpus, Part, SplitAssignment
from .index import InvertedIndex, match_ngram_ords, vocabulary
from .query import And, Not, Or, Phrase, QueryAst, Term, eval_query_ords


@dataclass(frozen=True)
class FeatureMatrix:
    features: tuple[tuple[str, ...], ...]  # n-grams, duplicate-free
    rows: np.ndarray  # bool, (len(doc_ids), len(features))
    doc_ids: tuple[str, ...]  # universe, aligned with rows

    def labels_for(self, corpus: Corpus, class_name: str) -> np.ndarray:
        return np.array(
            [class_name in corpus.by_id[d].gold_labels for d in self.doc_ids], dtype=bool
        )


@dataclass
class TreeNode:
    pos_fraction: float
    count: int
    feature: Optional[int] = None
    left: Optional["TreeNode"] = None  # feature absent
    right: Optional["TreeNode"] = None  # feature present

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


@dataclass(frozen=True)
class InducedRule:
    """Conjunction of (ngram, present?) literals.

    precision/recall are out-of-bag estimates when produced by
    induce_rules and validation-part values after filter_rules.
    """

    literals: frozenset  # of (tuple[str, ...], bool)
    precision: float
    recall: float

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 0.0 if p + r == 0 else 2 * p * r / (p + r)

    def sorted_literals(self) -> list[tuple[tuple[str, ...], bool]]:
        return sorted(self.literals, key=lambda lit: (lit[0], not lit[1]))


def extract_features(
    index: InvertedIndex,
    part_ids: Iterable[str],
    max_n: int = 3,
    min_df: int = 2,
    max_features: int = 1000,
) -> FeatureMatrix:
    """Presence matrix of the top-df n-grams (ties by n-gram) over the part."""
    universe = index.ordinals(part_ids)
    records = list(vocabulary(index, universe, max_n, min_df))
    if not records:
        raise ValueError("no n-grams survive the document-frequency filter")
    records.sort(key=lambda r: (-r.df_total, r.ngram))
    features = tuple(r.ngram for r in records[:max_features])

    rows = np.zeros((len(universe), len(features)), dtype=bool)
    for j, ngram in enumerate(features):
        hit = match_ngram_ords(index, ngram, universe)
        rows[np.searchsorted(universe, hit), j] = True
    return FeatureMatrix(features, rows, tuple(index.ids(universe)))


def _gini(pos: float, total: float) -> float:
    if total == 0:
        return 0.0
    p = pos / total
    return 1.0 - p * p - (1.0 - p) * (1.0 - p)


def train_tree(
    matrix: np.ndarray,
    labels: np.ndarray,
    max_depth: int,
    min_leaf: int,
    rng: np.random.Generator,
) -> TreeNode:
    """Greedy CART on binary features; each node draws ceil(sqrt(F)) split
    candidates from the features not already used on its path."""
    n, n_features = matrix.shape
    if n < 2 * min_leaf:
        raise ValueError(f"need at least {2 * min_leaf} rows, got {n}")
    k = math.ceil(math.sqrt(n_features))

    def grow(idx: np.ndarray, depth: int, used: frozenset) -> TreeNode:
        count = len(idx)
        pos = int(labels[idx].sum())
        node = TreeNode(pos_fraction=pos / count, count=count)
        if depth >= max_depth or count < 2 * min_leaf or pos in (0, count):
            return node
        allowed = [j for j in range(n_features) if j not in used]
        if not allowed:
            return node
        cand = rng.choice(allowed, size=min(k, len(allowed)), replace=False)
        cand.sort()

        sub = matrix[np.ix_(idx, cand)]
        n_right = sub.sum(axis=0)
        n_left = count - n_right
        pos_right = (sub & labels[idx, None]).sum(axis=0)
        pos_left = pos - pos_right
        valid = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not valid.any():
            return node
        with np.errstate(divide="ignore", invalid="ignore"):
            p_r = np.where(n_right > 0, pos_right / np.maximum(n_right, 1), 0.0)
            p_l = np.where(n_left > 0, pos_left / np.maximum(n_left, 1), 0.0)
        gini_r = 1.0 - p_r**2 - (1.0 - p_r) ** 2
        gini_l = 1.0 - p_l**2 - (1.0 - p_l) ** 2
        weighted = (n_left * gini_l + n_right * gini_r) / count
        decrease = np.where(valid, _gini(pos, count) - weighted, -np.inf)
        best = int(np.argmax(decrease))
        if decrease[best] <= 1e-12:
            return node
        j = int(cand[best])
        mask = matrix[idx, j]
        node.feature = j
        node.left = grow(idx[~mask], depth + 1, used | {j})
        node.right = grow(idx[mask], depth + 1, used | {j})
        return node

    return grow(np.arange(n), 0, frozenset())


def _walk_paths(node: TreeNode, path: list) -> Iterable[tuple[list, TreeNode]]:
    if node.is_leaf:
        yield list(path), node
        return
    path.append((node.feature, False))
    yield from _walk_paths(node.left, path)
    path[-1] = (node.feature, True)
    yield from _walk_paths(node.right, path)
    path.pop()


def _apply_literals(rows, features_index, literals) -> np.ndarray:
    mask = np.ones(len(rows), dtype=bool)
    for ngram, present in literals:
        mask &= rows[:, features_index[ngram]] == present
    return mask


def _pr(predicted: np.ndarray, gold: np.ndarray) -> tuple[float, float]:
    tp = int((predicted & gold).sum())
    p = tp / int(predicted.sum()) if predicted.any() else 0.0
    r = tp / int(gold.sum()) if gold.any() else 0.0
    return p, r


def _rule_order_key(rule: InducedRule):
    return (-rule.f1, len(rule.literals), str(rule.sorted_literals()))


def induce_rules(
    matrix: FeatureMatrix,
    labels: np.ndarray,
    n_trees: int = 30,
    max_depth: int = 3,
    min_leaf: int = 5,
    seed: int = 0,
) -> list[InducedRule]:
    """Candidate rules from n_trees bootstrap-trained trees: every path to a
    leaf with positive fraction > 0.5 becomes a conjunction, scored on that
    tree's out-of-bag docs. Duplicate literal sets keep their best score."""
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    rng = np.random.default_rng(seed)
    n = len(labels)
    features_index = {f: j for j, f in enumerate(matrix.features)}
    best: dict[frozenset, InducedRule] = {}
    for _ in range(n_trees):
        boot = rng.integers(0, n, size=n)
        oob = np.setdiff1d(np.arange(n), np.unique(boot))
        tree = train_tree(matrix.rows[boot], labels[boot], max_depth, min_leaf, rng)
        for path, leaf in _walk_paths(tree, []):
            if leaf.pos_fraction <= 0.5 or not path:
                continue
            literals = frozenset((matrix.features[j], present) for j, present in path)
            if len(oob):
                predicted = _apply_literals(matrix.rows[oob], features_index, literals)
                p, r = _pr(predicted, labels[oob])
            else:
                p = r = 0.0
            rule = InducedRule(literals, p, r)
            old = best.get(literals)
            if old is None or (rule.f1, rule.precision) > (old.f1, old.precision):
                best[literals] = rule
    return sorted(best.values(), key=_rule_order_key)


def filter_rules(
    candidates: Sequence[InducedRule],
    index: InvertedIndex,
    part_ids: Iterable[str],
    gold_ids: Iterable[str],
    min_precision: float = 0.5,
    min_recall: float = 0.05,
    max_rules: int = 16,
) -> list[InducedRule]:
    """Re-score candidates on a held-out part via query evaluation and keep
    the best max_rules above the precision/recall thresholds."""
    universe = index.ordinals(part_ids)
    gold = set(gold_ids)
    kept: dict[frozenset, InducedRule] = {}
    for rule in candidates:
        if rule.literals in kept:
            continue
        matched = set(index.ids(eval_query_ords(to_query([rule]), index, universe)))
        tp = len(matched & gold)
        p = tp / len(matched) if matched else 0.0
        r = tp / len(gold) if gold else 0.0
        if p >= min_precision and r >= min_recall:
            kept[rule.literals] = replace(rule, precision=p, recall=r)
    return sorted(kept.values(), key=_rule_order_key)[:max_rules]


def to_query(rules: Sequence[InducedRule]) -> QueryAst:
    """OR of per-rule conjunctions; literals ordered by n-gram (present
    before absent on ties) so output is reproducible."""
    if not rules:
        raise ValueError("no rules to convert")

    def atom(ngram: tuple[str, ...]) -> QueryAst:
        return Term(ngram[0]) if len(ngram) == 1 else Phrase(ngram)

    def conj(rule: InducedRule) -> QueryAst:
        parts = [
            atom(ngram) if present else Not(atom(ngram))
            for ngram, present in rule.sorted_literals()
        ]
        ast = parts[0]
        for p in parts[1:]:
            ast = And(ast, p)
        return ast

    ast = conj(rules[0])
    for rule in rules[1:]:
        ast = Or(ast, conj(rule))
    return ast


@dataclass(frozen=True)
class InductParams:
    max_n: int = 3
    min_df: int = 2
    max_features: int = 1000
    n_trees: int = 30
    max_depth: int = 3
    min_leaf: int = 5
    min_precision: float = 0.5
    min_recall: float = 0.05
    max_rules: int = 16
    seed: int = 0


def induce_for_class(
    corpus: Corpus,
    index: InvertedIndex,
    split: SplitAssignment,
    class_name: str,
    params: InductParams = InductParams(),
) -> list[InducedRule]:
    """Full pipeline: features and trees on the train part, pruning on the
    validation part. The test part is never touched."""
    if class_name not in corpus.labels:
        raise ValueError(f"unknown class {class_name!r}")
    train_ids = split.part_ids(Part.TRAIN)
    val_ids = split.part_ids(Part.VALIDATION)
    if not train_ids or not val_ids:
        raise ValueError("induction needs non-empty train and validation parts")
    matrix = extract_features(
        index, train_ids, params.max_n, params.min_df, params.max_features
    )
    labels = matrix.labels_for(corpus, class_name)
    candidates = induce_rules(
        matrix, labels, params.n_trees, params.max_depth, params.min_leaf, params.seed
    )
    gold_val = [d for d in val_ids if class_name in corpus.by_id[d].gold_labels]
    return filter_rules(
        candidates,
        index,
        val_ids,
        gold_val,
        params.min_precision,
        params.min_recall,
        params.max_rules,
    )

"""Shared oracles and generators.

The oracles here deliberately avoid the production code paths: tokenization
is a character scan, n-gram matching a token-window scan, and query
evaluation a per-document recursive walk.
"""

import random

import pytest

from rulebench.corpus import Corpus, Document
from rulebench.query import And, Not, Or, Phrase, Term


def naive_tokenize(text):
    out, cur = [], []
    for ch in text.lower():
        if ch.isalnum() and ch != "_":
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


def contains_ngram(tokens, ngram):
    n = len(ngram)
    return any(tuple(tokens[i : i + n]) == tuple(ngram) for i in range(len(tokens) - n + 1))


def doc_matches(ast, tokens):
    if isinstance(ast, Term):
        return ast.token in tokens
    if isinstance(ast, Phrase):
        return contains_ngram(tokens, ast.tokens)
    if isinstance(ast, And):
        return doc_matches(ast.left, tokens) and doc_matches(ast.right, tokens)
    if isinstance(ast, Or):
        return doc_matches(ast.left, tokens) or doc_matches(ast.right, tokens)
    if isinstance(ast, Not):
        return not doc_matches(ast.child, tokens)
    raise TypeError(ast)


def naive_eval(ast, corpus, universe_ids):
    return {d for d in universe_ids if doc_matches(ast, corpus.by_id[d].tokens)}


VOCAB = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"]


def random_corpus(rng, max_docs=200, vocab=VOCAB, labels=("A", "B")):
    n = rng.randint(1, max_docs)
    docs = []
    for i in range(n):
        words = [rng.choice(vocab) for _ in range(rng.randint(0, 12))]
        docs.append(Document.make(f"d{i}", " ".join(words), [rng.choice(labels)]))
    return Corpus(docs)


def random_ast(rng, max_depth=4, vocab=VOCAB):
    if max_depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.25:
            n = rng.randint(2, 3)
            return Phrase(tuple(rng.choice(vocab) for _ in range(n)))
        return Term(rng.choice(vocab))
    kind = rng.choice(["and", "or", "not"])
    if kind == "not":
        return Not(random_ast(rng, max_depth - 1, vocab))
    left = random_ast(rng, max_depth - 1, vocab)
    right = random_ast(rng, max_depth - 1, vocab)
    return And(left, right) if kind == "and" else Or(left, right)


@pytest.fixture
def rng():
    return random.Random(0x5EED)

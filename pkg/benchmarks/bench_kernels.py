#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Micro-benchmarks drive both implementations directly; the end-to-end rows
use whichever backend the package selected at import (re-run with
RULEBENCH_PURE=1 to compare full-query latency on the fallback).

Usage: python benchmarks/bench_kernels.py [--docs 100000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from rulebench.corpus import Corpus, Document, Part, split_corpus
from rulebench.index import build_index
from rulebench.kernels import BACKEND, _pure
from rulebench.query import eval_query_ords, parse_query
from rulebench.stats import SortKey, class_term_stats, rank_terms

try:
    from rulebench.kernels import _native
except ImportError:
    _native = None

I32 = np.int32


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_row(name, fn_pure, fn_native, repeat):
    t_pure = timeit(fn_pure, repeat)
    if fn_native is None:
        print(f"{name:<28} {t_pure * 1e3:>10.2f} {'-':>10} {'-':>8}")
        return
    t_nat = timeit(fn_native, repeat)
    speedup = t_pure / t_nat if t_nat else float("inf")
    print(f"{name:<28} {t_pure * 1e3:>10.2f} {t_nat * 1e3:>10.2f} {speedup:>7.1f}x")


def make_sorted(rng, n, max_val):
    return np.unique(rng.integers(0, max_val, size=n).astype(I32))


def make_postings(rng, n_docs, max_doc, pos_per_doc):
    docs = make_sorted(rng, n_docs, max_doc)
    counts = rng.integers(1, pos_per_doc + 1, size=len(docs))
    offs = np.zeros(len(docs) + 1, dtype=I32)
    np.cumsum(counts, out=offs[1:])
    pos = np.concatenate(
        [np.sort(rng.choice(200, size=c, replace=False)) for c in counts]
    ).astype(I32)
    return docs, offs, pos


def micro(repeat):
    rng = np.random.default_rng(7)
    a = make_sorted(rng, 300_000, 1_000_000)
    b = make_sorted(rng, 250_000, 1_000_000)
    print(f"{'kernel':<28} {'pure ms':>10} {'native ms':>10} {'gain':>8}")
    for name in ("intersect_sorted", "union_sorted", "difference_sorted"):
        bench_row(
            name,
            lambda f=getattr(_pure, name): f(a, b),
            None if _native is None else (lambda f=getattr(_native, name): f(a, b)),
            repeat,
        )
    pa = make_postings(rng, 60_000, 500_000, 4)
    pb = make_postings(rng, 60_000, 500_000, 4)
    bench_row(
        "phrase_step",
        lambda: _pure.phrase_step(*pa, *pb),
        None if _native is None else (lambda: _native.phrase_step(*pa, *pb)),
        repeat,
    )
    vocab = 200_000
    flat = rng.integers(0, vocab, size=2_000_000).astype(I32)
    offs = np.arange(0, len(flat) + 1, 100, dtype=I32)
    flags = (rng.random(len(offs) - 1) < 0.3).astype(np.uint8)
    bench_row(
        "doc_distinct_counts",
        lambda: _pure.doc_distinct_counts(flat, offs, flags, vocab),
        None
        if _native is None
        else (lambda: _native.doc_distinct_counts(flat, offs, flags, vocab)),
        repeat,
    )


def synthetic_corpus(n_docs, doc_len, vocab_size, seed=1):
    rng = np.random.default_rng(seed)
    vocab = np.array([f"t{i}" for i in range(vocab_size)])
    keys = np.array(["cannot", "apparent", "prohibit", "definition", "filler"])
    planted = keys[rng.integers(0, len(keys), size=n_docs)]
    ids = rng.integers(0, vocab_size, size=(n_docs, doc_len - 1))
    docs = []
    for i in range(n_docs):
        tokens = vocab[ids[i]].tolist()
        tokens.append(str(planted[i]))
        label = "pos" if planted[i] != "filler" else "neg"
        docs.append(Document(f"d{i}", " ".join(tokens), tuple(tokens), (label,)))
    return Corpus(docs)


def end_to_end(n_docs, repeat):
    print(f"\nend-to-end (backend={BACKEND}, {n_docs} docs x 100 tokens)")
    corpus = synthetic_corpus(n_docs, 100, max(1000, n_docs // 2))
    t0 = time.perf_counter()
    index = build_index(corpus)
    print(f"{'index build':<28} {time.perf_counter() - t0:>10.2f}s")
    split = split_corpus(corpus, (0.2, 0.1, 0.7), seed=0)
    universe = index.ordinals(split.part_ids(Part.TRAIN))
    ast = parse_query("cannot OR apparent OR prohibit OR definition")
    eval_query_ords(ast, index, universe)
    t = timeit(lambda: eval_query_ords(ast, index, universe), repeat)
    print(f"{'saved-query evaluation':<28} {t * 1e3:>10.2f}ms")
    t = timeit(
        lambda: rank_terms(
            class_term_stats(index, corpus, split, Part.TRAIN, "pos", 1, 2),
            SortKey("term_f1", "desc"),
            50,
        ),
        max(1, repeat // 2),
    )
    print(f"{'stats table (unigrams)':<28} {t:>10.2f}s")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--docs", type=int, default=100_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _native is None:
        print("note: compiled kernels unavailable, micro rows show fallback only\n")
    micro(args.repeat)
    end_to_end(args.docs, args.repeat)


if __name__ == "__main__":
    main()

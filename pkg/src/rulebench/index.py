"""Positional inverted index over a corpus, with n-gram lookups.

Postings are CSR-encoded over three flat arrays so building stays
vectorized; per-token lists are zero-copy views into them. Bigrams and
trigrams are matched by positional adjacency joins rather than being
materialized, which keeps memory flat on long documents.
"""

from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

import numpy as np

from . import kernels as K
from .corpus import Corpus

_I32 = np.int32

# token-id encoding of n-grams as int64 needs vocab**3 < 2**63
_MAX_VOCAB = 1 << 21


class PostingList(NamedTuple):
    docs: np.ndarray  # sorted unique doc ordinals, int32
    offs: np.ndarray  # int32, len(docs) + 1
    pos: np.ndarray  # int32, strictly increasing per doc slice


class NgramRecord(NamedTuple):
    ngram: tuple[str, ...]
    df_total: int


_EMPTY = PostingList(
    np.empty(0, dtype=_I32), np.zeros(1, dtype=_I32), np.empty(0, dtype=_I32)
)


class InvertedIndex:
    """Immutable after build; all lookups are safe for concurrent use."""

    def __init__(self, corpus: Corpus):
        self.doc_ids: tuple[str, ...] = tuple(doc.id for doc in corpus)
        self.doc_count = len(self.doc_ids)
        self._ord_of = {doc_id: i for i, doc_id in enumerate(self.doc_ids)}

        vocab: list[str] = []
        token_id: dict[str, int] = {}
        lengths = np.empty(self.doc_count, dtype=np.int64)
        flat: list[int] = []
        for i, doc in enumerate(corpus):
            lengths[i] = len(doc.tokens)
            for tok in doc.tokens:
                tid = token_id.get(tok)
                if tid is None:
                    tid = len(vocab)
                    token_id[tok] = tid
                    vocab.append(tok)
                flat.append(tid)
        if len(vocab) > _MAX_VOCAB:
            raise ValueError(f"vocabulary too large ({len(vocab)} tokens)")
        self.vocab: tuple[str, ...] = tuple(vocab)
        self._token_id = token_id
        self.row_ids = np.asarray(flat, dtype=_I32)
        self.row_offs = np.zeros(self.doc_count + 1, dtype=np.int64)
        np.cumsum(lengths, out=self.row_offs[1:])

        self.postings: dict[str, PostingList] = {}
        n = len(self.row_ids)
        if n:
            occ_doc = np.repeat(
                np.arange(self.doc_count, dtype=_I32), lengths
            )
            occ_pos = (np.arange(n, dtype=np.int64) - self.row_offs[occ_doc]).astype(_I32)
            order = np.argsort(self.row_ids, kind="stable")
            st = self.row_ids[order]
            sd = occ_doc[order]
            sp = occ_pos[order]
            entry_mask = np.empty(n, dtype=bool)
            entry_mask[0] = True
            entry_mask[1:] = (st[1:] != st[:-1]) | (sd[1:] != sd[:-1])
            entry_docs = sd[entry_mask]
            entry_counts = np.bincount(np.cumsum(entry_mask) - 1)
            entry_offs = np.zeros(len(entry_docs) + 1, dtype=np.int64)
            np.cumsum(entry_counts, out=entry_offs[1:])
            entry_tok = st[entry_mask]
            tok_entry_bounds = np.searchsorted(entry_tok, np.arange(len(vocab) + 1))
            for tid, tok in enumerate(vocab):
                lo, hi = tok_entry_bounds[tid], tok_entry_bounds[tid + 1]
                offs = (entry_offs[lo : hi + 1] - entry_offs[lo]).astype(_I32)
                self.postings[tok] = PostingList(
                    entry_docs[lo:hi], offs, sp[entry_offs[lo] : entry_offs[hi]]
                )

    def posting(self, token: str) -> PostingList:
        return self.postings.get(token, _EMPTY)

    def ordinals(self, doc_ids: Iterable[str]) -> np.ndarray:
        """Sorted int32 ordinal array for a collection of document ids."""
        arr = np.fromiter((self._ord_of[d] for d in doc_ids), dtype=_I32)
        arr.sort()
        return arr

    def ids(self, ordinals: Sequence[int]) -> list[str]:
        return [self.doc_ids[i] for i in ordinals]

    def all_ordinals(self) -> np.ndarray:
        return np.arange(self.doc_count, dtype=_I32)

    def doc_token_ids(self, ordinal: int) -> np.ndarray:
        return self.row_ids[self.row_offs[ordinal] : self.row_offs[ordinal + 1]]


def build_index(corpus: Corpus) -> InvertedIndex:
    return InvertedIndex(corpus)


def match_ngram_ords(
    index: InvertedIndex, ngram: Sequence[str], universe: np.ndarray
) -> np.ndarray:
    """Ordinals of universe docs containing the n-gram consecutively."""
    if not 1 <= len(ngram) <= 3:
        raise ValueError(f"ngram length must be 1-3, got {len(ngram)}")
    first = index.posting(ngram[0])
    docs, offs, pos = first.docs, first.offs, first.pos
    for tok in ngram[1:]:
        nxt = index.posting(tok)
        docs, offs, pos = K.phrase_step(docs, offs, pos, nxt.docs, nxt.offs, nxt.pos)
        if not len(docs):
            break
    return K.intersect_sorted(docs, universe)


def match_ngram(
    index: InvertedIndex, ngram: Sequence[str], universe: Iterable[str]
) -> set[str]:
    uni = index.ordinals(universe)
    return set(index.ids(match_ngram_ords(index, ngram, uni)))


def _universe_rows(index: InvertedIndex, universe: np.ndarray):
    """Flat token ids + row offsets for the given doc ordinals."""
    slices = [index.doc_token_ids(o) for o in universe]
    lengths = np.fromiter((len(s) for s in slices), dtype=np.int64, count=len(slices))
    offs = np.zeros(len(slices) + 1, dtype=_I32)
    np.cumsum(lengths, out=offs[1:])
    flat = np.concatenate(slices) if slices else np.empty(0, dtype=_I32)
    return flat.astype(_I32, copy=False), offs


def ngram_class_frequencies(
    index: InvertedIndex,
    universe: np.ndarray,
    in_class: Optional[np.ndarray],
    max_n: int,
    min_df: int,
) -> Iterator[tuple[tuple[str, ...], int, int]]:
    """Stream (ngram, df, df_in) over the universe, one entry per n-gram
    occurring in at least min_df universe docs.

    ``in_class`` flags universe rows (aligned with the sorted ordinals);
    None means df_in is reported as 0.
    """
    if not 1 <= max_n <= 3:
        raise ValueError(f"max_n must be 1-3, got {max_n}")
    if min_df < 1:
        raise ValueError(f"min_df must be >= 1, got {min_df}")
    flat, offs = _universe_rows(index, universe)
    flags = (
        np.zeros(len(universe), dtype=np.uint8)
        if in_class is None
        else np.asarray(in_class, dtype=np.uint8)
    )
    vsize = len(index.vocab)
    df, df_in = K.doc_distinct_counts(flat, offs, flags, vsize)
    for tid in np.nonzero(df >= min_df)[0]:
        yield (index.vocab[tid],), int(df[tid]), int(df_in[tid])

    v = np.int64(vsize)
    for n in (2, 3):
        if max_n < n:
            break
        counts: dict[int, int] = {}
        counts_in: dict[int, int] = {}
        for r in range(len(universe)):
            row = flat[offs[r] : offs[r + 1]].astype(np.int64)
            if len(row) < n:
                continue
            if n == 2:
                codes = row[:-1] * v + row[1:]
            else:
                codes = (row[:-2] * v + row[1:-1]) * v + row[2:]
            uniq = np.unique(codes)
            flagged = bool(flags[r])
            for c in uniq.tolist():
                counts[c] = counts.get(c, 0) + 1
                if flagged:
                    counts_in[c] = counts_in.get(c, 0) + 1
        for code, df_n in counts.items():
            if df_n < min_df:
                continue
            if n == 2:
                toks = (index.vocab[code // v], index.vocab[code % v])
            else:
                toks = (
                    index.vocab[code // (v * v)],
                    index.vocab[(code // v) % v],
                    index.vocab[code % v],
                )
            yield toks, df_n, counts_in.get(code, 0)


def vocabulary(
    index: InvertedIndex, universe: Iterable[str], max_n: int, min_df: int
) -> Iterator[NgramRecord]:
    """Every n-gram (n <= max_n) present in at least min_df universe docs,
    with its document frequency over that universe."""
    uni = universe if isinstance(universe, np.ndarray) else index.ordinals(universe)
    for ngram, df, _ in ngram_class_frequencies(index, uni, None, max_n, min_df):
        yield NgramRecord(ngram, df)

"""Pure-Python (numpy) implementations of the hot kernels.

Used when the compiled extension is unavailable or when RULEBENCH_PURE=1.
All doc arrays are sorted, duplicate-free int32 ordinals; position lists
are CSR-encoded (``offs`` has one more entry than ``docs``) with strictly
increasing positions per document.
"""

import numpy as np

BACKEND = "pure"

_I32 = np.int32


def intersect_sorted(a, b):
    return np.intersect1d(a, b, assume_unique=True).astype(_I32, copy=False)


def union_sorted(a, b):
    return np.union1d(a, b).astype(_I32, copy=False)


def difference_sorted(a, b):
    return np.setdiff1d(a, b, assume_unique=True).astype(_I32, copy=False)


def phrase_step(docs_a, offs_a, pos_a, docs_b, offs_b, pos_b):
    """Adjacency join of two positional posting lists.

    Keeps documents where some position p in list A is immediately followed
    by p+1 in list B, and returns the CSR postings of those *continuation*
    positions (p+1), so repeated application matches n-grams left to right.
    """
    common, ia, ib = np.intersect1d(
        docs_a, docs_b, assume_unique=True, return_indices=True
    )
    out_docs = []
    out_pos = []
    for k in range(len(common)):
        i, j = ia[k], ib[k]
        shifted = pos_a[offs_a[i] : offs_a[i + 1]] + 1
        hits = np.intersect1d(shifted, pos_b[offs_b[j] : offs_b[j + 1]], assume_unique=True)
        if len(hits):
            out_docs.append(common[k])
            out_pos.append(hits)
    if not out_docs:
        empty = np.empty(0, dtype=_I32)
        return empty, np.zeros(1, dtype=_I32), empty
    docs = np.asarray(out_docs, dtype=_I32)
    offs = np.zeros(len(out_pos) + 1, dtype=_I32)
    np.cumsum([len(p) for p in out_pos], out=offs[1:])
    pos = np.concatenate(out_pos).astype(_I32, copy=False)
    return docs, offs, pos


def doc_distinct_counts(flat_ids, row_offs, in_class, vocab_size):
    """Per-token document frequencies over a stacked batch of token rows.

    ``flat_ids`` concatenates the token-id sequences of the selected docs,
    ``row_offs`` delimits them, ``in_class`` flags each row. Returns
    (df, df_in): for every token id, the number of rows containing it and
    the number of flagged rows containing it. Each row counts once per
    token no matter how often the token repeats inside it.
    """
    n_rows = len(row_offs) - 1
    if n_rows == 0 or len(flat_ids) == 0:
        z = np.zeros(vocab_size, dtype=_I32)
        return z, z.copy()
    lengths = np.diff(row_offs)
    rows = np.repeat(np.arange(n_rows, dtype=np.int64), lengths)
    pairs = flat_ids.astype(np.int64) * n_rows + rows
    uniq = np.unique(pairs)
    tok = uniq // n_rows
    row = uniq % n_rows
    df = np.bincount(tok, minlength=vocab_size).astype(_I32, copy=False)
    flagged = np.asarray(in_class, dtype=bool)[row]
    df_in = np.bincount(tok[flagged], minlength=vocab_size).astype(_I32, copy=False)
    return df, df_in

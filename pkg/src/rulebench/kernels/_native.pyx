# cython: language_level=3
"""Compiled twins of the kernels in _pure.py (same contracts)."""

import numpy as np

BACKEND = "native"


def intersect_sorted(a, b):
    cdef int[::1] av = np.ascontiguousarray(a, dtype=np.int32)
    cdef int[::1] bv = np.ascontiguousarray(b, dtype=np.int32)
    cdef Py_ssize_t na = av.shape[0], nb = bv.shape[0]
    out = np.empty(min(na, nb), dtype=np.int32)
    cdef int[::1] ov = out
    cdef Py_ssize_t i = 0, j = 0, k = 0
    while i < na and j < nb:
        if av[i] < bv[j]:
            i += 1
        elif av[i] > bv[j]:
            j += 1
        else:
            ov[k] = av[i]
            k += 1
            i += 1
            j += 1
    return out[:k].copy()


def union_sorted(a, b):
    cdef int[::1] av = np.ascontiguousarray(a, dtype=np.int32)
    cdef int[::1] bv = np.ascontiguousarray(b, dtype=np.int32)
    cdef Py_ssize_t na = av.shape[0], nb = bv.shape[0]
    out = np.empty(na + nb, dtype=np.int32)
    cdef int[::1] ov = out
    cdef Py_ssize_t i = 0, j = 0, k = 0
    while i < na and j < nb:
        if av[i] < bv[j]:
            ov[k] = av[i]
            i += 1
        elif av[i] > bv[j]:
            ov[k] = bv[j]
            j += 1
        else:
            ov[k] = av[i]
            i += 1
            j += 1
        k += 1
    while i < na:
        ov[k] = av[i]
        i += 1
        k += 1
    while j < nb:
        ov[k] = bv[j]
        j += 1
        k += 1
    return out[:k].copy()


def difference_sorted(a, b):
    cdef int[::1] av = np.ascontiguousarray(a, dtype=np.int32)
    cdef int[::1] bv = np.ascontiguousarray(b, dtype=np.int32)
    cdef Py_ssize_t na = av.shape[0], nb = bv.shape[0]
    out = np.empty(na, dtype=np.int32)
    cdef int[::1] ov = out
    cdef Py_ssize_t i = 0, j = 0, k = 0
    while i < na:
        while j < nb and bv[j] < av[i]:
            j += 1
        if j == nb or bv[j] != av[i]:
            ov[k] = av[i]
            k += 1
        i += 1
    return out[:k].copy()


def phrase_step(docs_a, offs_a, pos_a, docs_b, offs_b, pos_b):
    cdef int[::1] da = np.ascontiguousarray(docs_a, dtype=np.int32)
    cdef int[::1] oa = np.ascontiguousarray(offs_a, dtype=np.int32)
    cdef int[::1] pa = np.ascontiguousarray(pos_a, dtype=np.int32)
    cdef int[::1] db = np.ascontiguousarray(docs_b, dtype=np.int32)
    cdef int[::1] ob = np.ascontiguousarray(offs_b, dtype=np.int32)
    cdef int[::1] pb = np.ascontiguousarray(pos_b, dtype=np.int32)
    cdef Py_ssize_t na = da.shape[0], nb = db.shape[0]

    out_docs = np.empty(min(na, nb), dtype=np.int32)
    out_offs = np.zeros(min(na, nb) + 1, dtype=np.int32)
    out_pos = np.empty(pb.shape[0], dtype=np.int32)
    cdef int[::1] odv = out_docs
    cdef int[::1] oov = out_offs
    cdef int[::1] opv = out_pos

    cdef Py_ssize_t i = 0, j = 0, nd = 0, np_ = 0
    cdef Py_ssize_t s, t, ea, eb, hit0
    cdef int target
    while i < na and j < nb:
        if da[i] < db[j]:
            i += 1
        elif da[i] > db[j]:
            j += 1
        else:
            s = oa[i]
            ea = oa[i + 1]
            t = ob[j]
            eb = ob[j + 1]
            hit0 = np_
            while s < ea and t < eb:
                target = pa[s] + 1
                if pb[t] < target:
                    t += 1
                elif pb[t] > target:
                    s += 1
                else:
                    opv[np_] = target
                    np_ += 1
                    s += 1
                    t += 1
            if np_ > hit0:
                odv[nd] = da[i]
                oov[nd + 1] = <int> np_
                nd += 1
            i += 1
            j += 1
    return out_docs[:nd].copy(), out_offs[: nd + 1].copy(), out_pos[:np_].copy()


def doc_distinct_counts(flat_ids, row_offs, in_class, vocab_size):
    cdef int[::1] ids = np.ascontiguousarray(flat_ids, dtype=np.int32)
    cdef int[::1] offs = np.ascontiguousarray(row_offs, dtype=np.int32)
    cdef unsigned char[::1] flags = np.ascontiguousarray(in_class, dtype=np.uint8)
    cdef Py_ssize_t n_rows = offs.shape[0] - 1
    cdef Py_ssize_t v = vocab_size

    df = np.zeros(v, dtype=np.int32)
    df_in = np.zeros(v, dtype=np.int32)
    # stamp[tok] records the last row that counted tok, so repeats within a
    # row are skipped without clearing the whole array between rows
    stamp = np.full(v, -1, dtype=np.int64)
    cdef int[::1] dfv = df
    cdef int[::1] div = df_in
    cdef long long[::1] st = stamp

    cdef Py_ssize_t r, p, end
    cdef int tok
    cdef unsigned char flag
    for r in range(n_rows):
        flag = flags[r]
        p = offs[r]
        end = offs[r + 1]
        while p < end:
            tok = ids[p]
            if st[tok] != r:
                st[tok] = r
                dfv[tok] += 1
                if flag:
                    div[tok] += 1
            p += 1
    return df, df_in

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting and intersection kernels.

Must stay behaviourally identical to ``_kernels_py``.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def segment_counts(const cnp.int64_t[::1] codes):
    """Run-length encode a sorted code array into (unique codes, counts)."""
    cdef Py_ssize_t n = codes.shape[0]
    cdef Py_ssize_t i, k = 0
    uniq = np.empty(n, dtype=np.int64)
    counts = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] u = uniq
    cdef cnp.int64_t[::1] c = counts
    if n == 0:
        return uniq, counts
    u[0] = codes[0]
    c[0] = 1
    for i in range(1, n):
        if codes[i] == u[k]:
            c[k] += 1
        else:
            k += 1
            u[k] = codes[i]
            c[k] = 1
    return uniq[:k + 1], counts[:k + 1]


def intersection_counts(const cnp.int64_t[::1] a_ptr, const cnp.int64_t[::1] a_items,
                        const cnp.int64_t[::1] b_ptr, const cnp.int64_t[::1] b_items):
    """Pairwise |A_i & B_j| for CSR-packed rows of sorted, unique, non-negative item ids.

    B is transposed into item -> rows postings, so each A row only touches
    the (j, item) pairs that actually hit.
    """
    cdef Py_ssize_t n_a = a_ptr.shape[0] - 1
    cdef Py_ssize_t n_b = b_ptr.shape[0] - 1
    out = np.zeros((n_a, n_b), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] o = out
    cdef Py_ssize_t i, j, p, q, n_items = 0
    cdef cnp.int64_t x
    for p in range(b_items.shape[0]):
        if b_items[p] + 1 > n_items:
            n_items = b_items[p] + 1
    post_ptr_arr = np.zeros(n_items + 1, dtype=np.int64)
    post_arr = np.empty(b_items.shape[0], dtype=np.int64)
    cdef cnp.int64_t[::1] post_ptr = post_ptr_arr
    cdef cnp.int64_t[::1] post = post_arr
    for p in range(b_items.shape[0]):
        post_ptr[b_items[p] + 1] += 1
    for p in range(n_items):
        post_ptr[p + 1] += post_ptr[p]
    fill_arr = post_ptr_arr[:-1].copy()
    cdef cnp.int64_t[::1] cursor = fill_arr
    for j in range(n_b):
        for q in range(b_ptr[j], b_ptr[j + 1]):
            x = b_items[q]
            post[cursor[x]] = j
            cursor[x] += 1
    for i in range(n_a):
        for p in range(a_ptr[i], a_ptr[i + 1]):
            x = a_items[p]
            if x < 0 or x >= n_items:
                continue
            for q in range(post_ptr[x], post_ptr[x + 1]):
                o[i, post[q]] += 1
    return out

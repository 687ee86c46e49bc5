"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``."""

from __future__ import annotations

import numpy as np


def segment_counts(codes):
    """Run-length encode a sorted code array into (unique codes, counts)."""
    uniq: list[int] = []
    counts: list[int] = []
    for code in codes.tolist():
        if uniq and uniq[-1] == code:
            counts[-1] += 1
        else:
            uniq.append(code)
            counts.append(1)
    return np.asarray(uniq, dtype=np.int64), np.asarray(counts, dtype=np.int64)


def intersection_counts(a_ptr, a_items, b_ptr, b_items):
    """Pairwise |A_i & B_j| for CSR-packed rows of sorted, unique item ids."""
    a_ptr, b_ptr = a_ptr.tolist(), b_ptr.tolist()
    a_items, b_items = a_items.tolist(), b_items.tolist()
    rows_b = [set(b_items[b_ptr[j]:b_ptr[j + 1]]) for j in range(len(b_ptr) - 1)]
    out = np.zeros((len(a_ptr) - 1, len(rows_b)), dtype=np.int64)
    for i in range(len(a_ptr) - 1):
        row = set(a_items[a_ptr[i]:a_ptr[i + 1]])
        if not row:
            continue
        for j, other in enumerate(rows_b):
            out[i, j] = len(row & other)
    return out

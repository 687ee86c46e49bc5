"""Kernel backend selection.

The compiled extension is used when it imports; set ``SEMSKETCH_PURE_PYTHON=1``
to force the fallback.
"""

from __future__ import annotations

import os
from typing import Iterable, Sequence

import numpy as np

if os.environ.get("SEMSKETCH_PURE_PYTHON"):
    from semsketch._kernels_py import intersection_counts, segment_counts

    BACKEND = "python"
else:
    try:
        from semsketch._kernels import intersection_counts, segment_counts

        BACKEND = "cython"
    except ImportError:  # extension not built
        from semsketch._kernels_py import intersection_counts, segment_counts

        BACKEND = "python"

__all__ = ["BACKEND", "intersection_counts", "segment_counts", "pack_rows", "count_codes"]


def pack_rows(rows: Sequence[Iterable[int]]) -> tuple[np.ndarray, np.ndarray]:
    """Pack integer sets into CSR (row pointer, sorted unique items)."""
    ptr = np.zeros(len(rows) + 1, dtype=np.int64)
    chunks = []
    for i, row in enumerate(rows):
        items = np.unique(np.fromiter(row, dtype=np.int64))
        chunks.append(items)
        ptr[i + 1] = ptr[i] + len(items)
    items = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return ptr, np.ascontiguousarray(items, dtype=np.int64)


def count_codes(codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Count occurrences of each integer code; results sorted by code."""
    ordered = np.sort(np.ascontiguousarray(codes, dtype=np.int64), kind="stable")
    return segment_counts(ordered)

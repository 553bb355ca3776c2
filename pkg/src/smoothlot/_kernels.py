"""Hot numeric kernels: per-row order statistics, top-k counting, systematic picks.

Two interchangeable backends.  The numba path compiles on first use and is
selected by default when numba imports; set SMOOTHLOT_NUMBA=0 to force the
pure-numpy path.  Selection kernels only move array elements, so no
floating-point arithmetic differs between backends; top-k membership can
differ only on exactly tied values (callers here feed continuous noise).
"""

from __future__ import annotations

import os

import numpy as np


def _numba_wanted() -> bool:
    return os.environ.get("SMOOTHLOT_NUMBA", "1").strip().lower() not in (
        "0",
        "false",
        "off",
        "no",
    )


HAS_NUMBA = False
if _numba_wanted():
    try:
        from numba import njit, prange

        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


# ---------------------------------------------------------------- numpy path


def _row_kth_largest_np(y: np.ndarray, kth: int) -> np.ndarray:
    n = y.shape[1]
    return np.partition(y, n - kth, axis=1)[:, n - kth]


def _topk_counts_np(y: np.ndarray, k: int) -> np.ndarray:
    n = y.shape[1]
    if k == n:
        return np.full(n, y.shape[0], dtype=np.int64)
    idx = np.argpartition(y, n - k, axis=1)[:, n - k :]
    return np.bincount(idx.ravel(), minlength=n).astype(np.int64)


def _systematic_batch_np(cum: np.ndarray, offsets: np.ndarray, k: int) -> np.ndarray:
    n = cum.size - 1
    pts = offsets[:, None] + np.arange(k, dtype=np.float64)[None, :]
    idx = np.searchsorted(cum, pts, side="right") - 1
    return np.minimum(idx, n - 1).astype(np.int64)


# ---------------------------------------------------------------- numba path

if HAS_NUMBA:

    @njit(cache=True)
    def _select_small(buf, m):
        """Value at sorted position m of buf (in place, Hoare-style quickselect)."""
        lo = 0
        hi = buf.size - 1
        while True:
            if lo == hi:
                return buf[lo]
            pivot = buf[(lo + hi) // 2]
            i = lo
            j = hi
            while i <= j:
                while buf[i] < pivot:
                    i += 1
                while buf[j] > pivot:
                    j -= 1
                if i <= j:
                    buf[i], buf[j] = buf[j], buf[i]
                    i += 1
                    j -= 1
            if m <= j:
                hi = j
            elif m >= i:
                lo = i
            else:
                return buf[m]

    @njit(cache=True, parallel=True)
    def _row_kth_largest_nb(y, kth):
        d, n = y.shape
        work = y.copy()  # rows are selected in place
        out = np.empty(d, dtype=np.float64)
        for r in prange(d):
            out[r] = _select_small(work[r], n - kth)
        return out

    @njit(cache=True, parallel=True)
    def _topk_counts_nb(y, k):
        d, n = y.shape
        if k == n:
            return np.full(n, d, dtype=np.int64)
        stripes = min(d, 64)
        partial = np.zeros((stripes, n), dtype=np.int64)
        work = y.copy()
        for s in prange(stripes):
            for r in range(s, d, stripes):
                thr = _select_small(work[r], n - k)
                greater = 0
                for i in range(n):
                    if y[r, i] > thr:
                        greater += 1
                ties_needed = k - greater
                for i in range(n):
                    v = y[r, i]
                    if v > thr:
                        partial[s, i] += 1
                    elif v == thr and ties_needed > 0:
                        partial[s, i] += 1
                        ties_needed -= 1
        counts = np.zeros(n, dtype=np.int64)
        for s in range(stripes):
            for i in range(n):
                counts[i] += partial[s, i]
        return counts

    @njit(cache=True)
    def _systematic_batch_nb(cum, offsets, k):
        d = offsets.size
        n = cum.size - 1
        out = np.empty((d, k), dtype=np.int64)
        for r in range(d):
            j = 0
            for t in range(k):
                x = offsets[r] + t
                while j < n - 1 and cum[j + 1] <= x:
                    j += 1
                out[r, t] = j
        return out


# ---------------------------------------------------------------- public API


def row_kth_largest(y: np.ndarray, kth: int) -> np.ndarray:
    """Per-row value of the kth largest entry (kth counted from 1)."""
    y = np.ascontiguousarray(y, dtype=np.float64)
    if not 1 <= kth <= y.shape[1]:
        raise ValueError(f"kth = {kth} outside 1..{y.shape[1]}")
    if HAS_NUMBA:
        return _row_kth_largest_nb(y, kth)
    return _row_kth_largest_np(y, kth)


def topk_counts(y: np.ndarray, k: int) -> np.ndarray:
    """How many rows include each column among their k largest entries."""
    y = np.ascontiguousarray(y, dtype=np.float64)
    if not 1 <= k <= y.shape[1]:
        raise ValueError(f"k = {k} outside 1..{y.shape[1]}")
    if HAS_NUMBA:
        return _topk_counts_nb(y, k)
    return _topk_counts_np(y, k)


def systematic_batch(cum: np.ndarray, offsets: np.ndarray, k: int) -> np.ndarray:
    """Indices selected by grid points offset + t over cumulative intervals.

    cum holds n+1 nondecreasing edges starting at 0; each row of the result
    lists the k intervals hit by one offset.  Points landing on a shared edge
    of empty intervals resolve to the following nonempty one.
    """
    cum = np.ascontiguousarray(cum, dtype=np.float64)
    offsets = np.ascontiguousarray(offsets, dtype=np.float64)
    if HAS_NUMBA:
        return _systematic_batch_nb(cum, offsets, k)
    return _systematic_batch_np(cum, offsets, k)

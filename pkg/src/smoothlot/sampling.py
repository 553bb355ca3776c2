"""Systematic sampling of exactly-k subsets with prescribed marginals.

Lay the inclusion probabilities end to end on [0, k), drop k points spaced
exactly 1 apart at a uniform random offset, and select the interval each
point lands in.  Every draw has exactly k distinct winners and candidate i
wins with probability p_i.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .core import check_marginals

# marginals this small are treated as exact zeros so their intervals vanish
ZERO_CLIP = 1e-12


def _cumulative(p: np.ndarray, k: int) -> np.ndarray:
    q = np.array(p, dtype=np.float64)
    q[q < ZERO_CLIP] = 0.0
    s = q.sum()
    if s <= 0:
        raise ValueError("all marginals are zero")
    q *= k / s
    # intervals wider than 1 could catch two points; marginals only exceed 1
    # by rounding, so the cap moves them by at most the budget tolerance
    np.minimum(q, 1.0, out=q)
    cum = np.zeros(q.size + 1)
    np.cumsum(q, out=cum[1:])
    cum[-1] = float(k)
    return cum


def systematic_sample(p: np.ndarray, k: int, rng) -> np.ndarray:
    """One subset draw: sorted indices of the k selected candidates."""
    sel = systematic_sample_batch(p, k, 1, rng)
    return sel[0]


def systematic_sample_batch(p: np.ndarray, k: int, draws: int, rng) -> np.ndarray:
    """(draws, k) array of selected indices, each row sorted ascending."""
    p = np.asarray(p, dtype=np.float64)
    n = p.size
    if not 1 <= k <= n:
        raise ValueError(f"budget k = {k} outside 1..{n}")
    check_marginals(p, k)
    if draws < 1:
        raise ValueError("need at least one draw")
    cum = _cumulative(p, k)
    rng = np.random.default_rng(rng)
    offsets = rng.random(draws)
    sel = _kernels.systematic_batch(cum, offsets, k)
    # points are 1 apart and every interval has width <= 1, so indices in a
    # row are strictly increasing already; sort defensively anyway
    sel.sort(axis=1)
    return sel


def inclusion_counts(p: np.ndarray, k: int, draws: int, seed) -> np.ndarray:
    """How often each candidate was selected over repeated systematic draws."""
    sel = systematic_sample_batch(p, k, draws, np.random.default_rng(seed))
    return np.bincount(sel.ravel(), minlength=np.asarray(p).size)

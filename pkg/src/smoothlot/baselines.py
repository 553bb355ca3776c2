"""Reference mechanisms the smooth lotteries are compared against.

Two families: the three-tier thresholded lottery (auto-accept above the
funding line, auto-reject below it, uniform randomization in the overlap
tier) and a two-set randomized-response rule whose selection flips on a
single review score crossing 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import IntervalVector, ReviewMatrix


@dataclass(frozen=True)
class ThresholdPolicy:
    """Tier formation rule: fixed score cutoffs or interval overlap with the funding line."""

    mode: str
    t_lo: float | None = None
    t_hi: float | None = None

    def __post_init__(self):
        if self.mode not in ("explicit", "interval"):
            raise ValueError(f"unknown threshold mode {self.mode!r}")
        if self.mode == "explicit":
            if self.t_lo is None or self.t_hi is None:
                raise ValueError("explicit mode needs both cutoffs")
            if self.t_lo > self.t_hi:
                raise ValueError(f"cutoffs out of order: {self.t_lo} > {self.t_hi}")


def funding_line(u: np.ndarray, k: int) -> float:
    """Utility of the rank-k candidate, ranking by utility descending with index tiebreak."""
    u = np.asarray(u, dtype=np.float64)
    if not 1 <= k <= u.size:
        raise ValueError(f"budget k = {k} outside 1..{u.size}")
    order = np.lexsort((np.arange(u.size), -u))
    return float(u[order[k - 1]])


def tiers(
    u: np.ndarray,
    k: int,
    intervals: IntervalVector | None = None,
    policy: ThresholdPolicy | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(accept, pool, reject) index arrays under the given tier rule.

    Interval mode draws the funding line at the rank-k utility; a candidate
    whose interval lies strictly above it is accepted, strictly below is
    rejected, and one whose interval touches the line joins the pool.
    """
    u = np.asarray(u, dtype=np.float64)
    if intervals is not None:
        line = funding_line(u, k)
        accept = intervals.lb > line
        reject = intervals.ub < line
    elif policy is not None and policy.mode == "explicit":
        accept = u > policy.t_hi
        reject = u < policy.t_lo
    else:
        raise ValueError("need intervals or an explicit ThresholdPolicy")
    pool = ~(accept | reject)
    return np.flatnonzero(accept), np.flatnonzero(pool), np.flatnonzero(reject)


def thresholded_lottery_marginals(
    u: np.ndarray,
    k: int,
    intervals: IntervalVector | None = None,
    policy: ThresholdPolicy | None = None,
) -> np.ndarray:
    """Three-tier lottery: accepts get 1, the pool splits the leftover budget evenly."""
    u = np.asarray(u, dtype=np.float64)
    accept, pool, _ = tiers(u, k, intervals=intervals, policy=policy)
    spare = k - accept.size
    if spare < 0 or spare > pool.size:
        raise ValueError(
            f"tiers infeasible for k = {k}: |accept| = {accept.size}, "
            f"|pool| = {pool.size}, |reject| = {u.size - accept.size - pool.size}"
        )
    p = np.zeros(u.size)
    p[accept] = 1.0
    if spare:
        p[pool] = spare / pool.size
    return p


def randomized_response_rule(
    X: ReviewMatrix, eps: float, k: int
) -> tuple[dict[tuple[int, ...], float], np.ndarray]:
    """Pick between the first and second blocks of k candidates from one review score.

    The first review of the first candidate is compared against 1/2; the
    favored block wins with probability a = e^eps / (1 + e^eps).  Flipping
    that single score across 1/2 moves the marginals by 2k tanh(eps/2) no
    matter how small the flip, which is what makes this rule a
    non-smoothness witness.
    """
    if eps < 0:
        raise ValueError("privacy parameter must be nonnegative")
    n = X.n
    if n < 2 * k:
        raise ValueError(f"need at least 2k = {2 * k} candidates, got {n}")
    a = math.exp(eps) / (1.0 + math.exp(eps))
    s1 = tuple(range(k))
    s2 = tuple(range(k, 2 * k))
    p_first = a if X.rows[0][0] < 0.5 else 1.0 - a
    sets = {s1: p_first, s2: 1.0 - p_first}
    p = np.zeros(n)
    p[list(s1)] = p_first
    p[list(s2)] = 1.0 - p_first
    return sets, p

"""Shared data model: review matrices, utility aggregators, marginal checks.

Scores live in [0, 1] after normalization.  Review matrices are ragged:
each candidate may carry a different number of reviews.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BUDGET_TOL = 1e-9

UTILITY_KINDS = ("mean", "median", "min", "max")


@dataclass(frozen=True)
class ReviewMatrix:
    """Ragged per-candidate review scores plus the smallest score step."""

    rows: tuple[np.ndarray, ...]
    tick: float = 1.0

    def __post_init__(self):
        if len(self.rows) < 1:
            raise ValueError("review matrix needs at least one candidate")
        rows = []
        for i, row in enumerate(self.rows):
            arr = np.asarray(row, dtype=np.float64)
            if arr.ndim != 1 or arr.size < 1:
                raise ValueError(f"candidate {i}: needs at least one review score")
            if np.any(arr < -BUDGET_TOL) or np.any(arr > 1.0 + BUDGET_TOL):
                j = int(np.argmax((arr < -BUDGET_TOL) | (arr > 1.0 + BUDGET_TOL)))
                raise ValueError(
                    f"candidate {i}, review {j}: score {arr[j]} outside [0, 1]"
                )
            arr.flags.writeable = False
            rows.append(arr)
        object.__setattr__(self, "rows", tuple(rows))
        if not self.tick > 0:
            raise ValueError("tick must be positive")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def counts(self) -> np.ndarray:
        return np.array([row.size for row in self.rows], dtype=np.int64)

    @property
    def m_min(self) -> int:
        return min(row.size for row in self.rows)

    def with_entry(self, i: int, j: int, value: float) -> "ReviewMatrix":
        """Copy of the matrix with score (i, j) replaced."""
        row = self.rows[i].copy()
        row[j] = value
        rows = self.rows[:i] + (row,) + self.rows[i + 1 :]
        return ReviewMatrix(rows, self.tick)

    def permuted(self, order) -> "ReviewMatrix":
        return ReviewMatrix(tuple(self.rows[i] for i in order), self.tick)


@dataclass(frozen=True)
class IntervalVector:
    """Per-candidate utility intervals [lb_i, ub_i]."""

    lb: np.ndarray
    ub: np.ndarray

    def __post_init__(self):
        lb = np.asarray(self.lb, dtype=np.float64)
        ub = np.asarray(self.ub, dtype=np.float64)
        if lb.shape != ub.shape or lb.ndim != 1:
            raise ValueError("interval bounds must be 1-d vectors of equal length")
        if np.any(lb > ub):
            i = int(np.argmax(lb > ub))
            raise ValueError(f"candidate {i}: lower bound {lb[i]} exceeds upper {ub[i]}")
        object.__setattr__(self, "lb", lb)
        object.__setattr__(self, "ub", ub)

    @property
    def n(self) -> int:
        return self.lb.size


@dataclass(frozen=True)
class UtilitySpec:
    """Aggregation rule plus its Lipschitz constants.

    lipschitz bounds how far the utility vector moves (l1) per unit of
    review change (l1,1); lower_lipschitz is the slope the rule can
    actually realize somewhere, used by the regret lower bound.
    """

    kind: str
    lipschitz: float
    lower_lipschitz: float

    def __post_init__(self):
        if self.kind not in UTILITY_KINDS:
            raise ValueError(f"unknown utility kind {self.kind!r}")
        if not (self.lipschitz > 0 and self.lower_lipschitz > 0):
            raise ValueError("Lipschitz constants must be positive")
        if self.lower_lipschitz > self.lipschitz + 1e-15:
            raise ValueError("lower_lipschitz cannot exceed lipschitz")

    @classmethod
    def for_counts(cls, kind: str, counts) -> "UtilitySpec":
        lam, c = lipschitz_constant(kind, counts)
        return cls(kind, lam, c)


def lipschitz_constant(kind: str, counts) -> tuple[float, float]:
    """(lipschitz, lower_lipschitz) for an aggregation rule over given review counts.

    Mean contracts by the review count, so the binding constant comes from
    the least-reviewed candidate.  Order statistics move one-for-one with
    a single score.
    """
    counts = np.asarray(counts, dtype=np.int64)
    if counts.size < 1 or np.any(counts < 1):
        raise ValueError("every candidate needs at least one review")
    if kind == "mean":
        lam = 1.0 / int(counts.min())
        return lam, lam
    if kind in ("median", "min", "max"):
        return 1.0, 1.0
    raise ValueError(f"unknown utility kind {kind!r}")


def normalize_reviews(raw_rows, s_min: float, s_max: float, step: float) -> ReviewMatrix:
    """Map raw scores on [s_min, s_max] affinely onto [0, 1].

    tick = step/(s_max - s_min) is the normalized size of one raw scale point.
    """
    if not s_max > s_min:
        raise ValueError("scale must satisfy s_max > s_min")
    if not step > 0:
        raise ValueError("scale step must be positive")
    span = s_max - s_min
    rows = []
    for i, raw in enumerate(raw_rows):
        arr = np.asarray(raw, dtype=np.float64)
        bad = (arr < s_min) | (arr > s_max)
        if np.any(bad):
            j = int(np.argmax(bad))
            raise ValueError(
                f"candidate {i}, review {j}: raw score {arr[j]} outside "
                f"scale [{s_min}, {s_max}]"
            )
        rows.append((arr - s_min) / span)
    return ReviewMatrix(tuple(rows), tick=step / span)


def utility(X: ReviewMatrix, spec: UtilitySpec) -> np.ndarray:
    """Aggregate each candidate's reviews into a scalar utility."""
    kind = spec.kind
    if kind == "mean":
        return np.array([row.mean() for row in X.rows])
    if kind == "median":
        # lower median: for even row length take the smaller middle value
        return np.array([np.sort(row)[(row.size - 1) // 2] for row in X.rows])
    if kind == "min":
        return np.array([row.min() for row in X.rows])
    if kind == "max":
        return np.array([row.max() for row in X.rows])
    raise ValueError(f"unknown utility kind {kind!r}")


def l11_distance(X: ReviewMatrix, Y: ReviewMatrix) -> float:
    """Entrywise l1 distance between two review matrices of identical shape."""
    if X.n != Y.n or any(a.size != b.size for a, b in zip(X.rows, Y.rows)):
        raise ValueError("review matrices differ in shape")
    return float(sum(np.abs(a - b).sum() for a, b in zip(X.rows, Y.rows)))


def leave_one_out_intervals(X: ReviewMatrix) -> IntervalVector:
    """Per-candidate range of delete-one-review means."""
    lb = np.empty(X.n)
    ub = np.empty(X.n)
    for i, row in enumerate(X.rows):
        m = row.size
        if m < 2:
            raise ValueError(f"candidate {i}: leave-one-out needs at least 2 reviews")
        loo = (row.sum() - row) / (m - 1)
        lb[i] = loo.min()
        ub[i] = loo.max()
    return IntervalVector(lb, ub)


def check_marginals(p: np.ndarray, k: int, tol: float = BUDGET_TOL) -> np.ndarray:
    """Validate a marginal vector: entries in [0,1], total equal to the budget."""
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("marginals must be a nonempty 1-d vector")
    if np.any(p < -tol) or np.any(p > 1.0 + tol):
        i = int(np.argmax((p < -tol) | (p > 1.0 + tol)))
        raise ValueError(f"marginal {i} = {p[i]} outside [0, 1]")
    total = float(p.sum())
    if abs(total - k) > tol:
        raise ValueError(f"marginals sum to {total}, expected budget {k}")
    return p

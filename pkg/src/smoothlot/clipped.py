"""Clipped linear lottery: p_i = clip(alpha * u_i + b) with the budget-matching intercept.

The intercept solves sum_i clip(z_i + b) = k by breakpoint search.  The total
is piecewise linear in b with kinks exactly at {-z_i} and {1 - z_i}, so the
solution is a linear interpolation inside the bracketing kink interval.  The
resulting vector is the Euclidean projection of z onto
{p in [0,1]^n : sum p = k}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BUDGET_TOL

POOL_TOL = 1e-12


@dataclass(frozen=True)
class ClippedLinearResult:
    p: np.ndarray
    alpha: float
    intercept: float
    k: int

    @property
    def accept(self) -> np.ndarray:
        return np.flatnonzero(self.p >= 1.0 - POOL_TOL)

    @property
    def pool(self) -> np.ndarray:
        return np.flatnonzero((self.p > POOL_TOL) & (self.p < 1.0 - POOL_TOL))

    @property
    def reject(self) -> np.ndarray:
        return np.flatnonzero(self.p <= POOL_TOL)


def slope_from_smoothness(L: float, lam: float) -> float:
    """Steepest slope whose composed matrix-to-marginals sensitivity stays <= L."""
    if not (L > 0 and lam > 0):
        raise ValueError("smoothness target and Lipschitz constant must be positive")
    return L / (2.0 * lam)


def _clip_total(z: np.ndarray, b: float) -> float:
    # shared by both intercept searches so their arithmetic is identical
    return float(np.clip(z + b, 0.0, 1.0).sum())


def _interpolate(z, k, lo, hi):
    f_lo = _clip_total(z, lo)
    f_hi = _clip_total(z, hi)
    if f_hi == f_lo:
        # flat stretch: any point matches the budget; take the left end
        return lo
    return lo + (hi - lo) * (k - f_lo) / (f_hi - f_lo)


def find_intercept_reference(z: np.ndarray, k: int) -> float:
    """Linear scan over the sorted breakpoints; quadratic-time reference."""
    z = np.asarray(z, dtype=np.float64)
    b = _degenerate_intercept(z, k)
    if b is not None:
        return b
    bp = np.sort(np.concatenate([-z, 1.0 - z]))
    for j in range(bp.size - 1):
        f_lo = _clip_total(z, bp[j])
        f_hi = _clip_total(z, bp[j + 1])
        if f_lo <= k <= f_hi:
            return _interpolate(z, k, bp[j], bp[j + 1])
    raise AssertionError("budget total never bracketed; unreachable for 0 <= k <= n")


def find_intercept(z: np.ndarray, k: int) -> float:
    """Intercept b with sum_i clip(z_i + b) = k.

    Binary search for the bracketing breakpoint interval.  The total is
    nondecreasing in b (floating-point included, since clip and + are
    monotone), so this lands on the same interval as the linear scan and
    evaluates the same interpolation arithmetic.
    """
    z = np.asarray(z, dtype=np.float64)
    b = _degenerate_intercept(z, k)
    if b is not None:
        return b
    bp = np.sort(np.concatenate([-z, 1.0 - z]))
    # smallest t with total(bp[t]) >= k; total(bp[0]) = 0 <= k <= n is bracketed
    lo, hi = 1, bp.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _clip_total(z, bp[mid]) >= k:
            hi = mid
        else:
            lo = mid + 1
    return _interpolate(z, k, bp[lo - 1], bp[lo])


def _degenerate_intercept(z: np.ndarray, k: int) -> float | None:
    n = z.size
    if n < 1:
        raise ValueError("need at least one candidate")
    if not float(k).is_integer() or k < 0 or k > n:
        raise ValueError(f"budget k = {k} outside 0..{n}")
    if k == 0:
        # left end of the feasible plateau; z_i + b <= 0 exactly in floats
        return float(-z.max())
    if k == n:
        # nudged past the plateau edge so every clipped term is exactly 1
        return float(np.max(1.0 - z)) + 1e-9
    return None


def clipped_linear_marginals(u: np.ndarray, alpha: float, k: int) -> ClippedLinearResult:
    """Marginals of the clipped linear lottery at slope alpha and budget k."""
    u = np.asarray(u, dtype=np.float64)
    if not alpha > 0:
        raise ValueError("slope must be positive")
    z = alpha * u
    b = find_intercept(z, k)
    p = np.clip(z + b, 0.0, 1.0)
    total = float(p.sum())
    if abs(total - k) > BUDGET_TOL:
        raise AssertionError(f"intercept search missed the budget: {total} != {k}")
    return ClippedLinearResult(p=p, alpha=float(alpha), intercept=float(b), k=int(k))


def lottery_pool(result: ClippedLinearResult) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(accept, pool, reject) index sets of a clipped-linear result."""
    return result.accept, result.pool, result.reject

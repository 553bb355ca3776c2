"""Ex post validity: interval dominance and repairs for lottery marginals.

A realized set is ex post valid when no selected candidate is interval-
dominated by an unselected one.  Two repairs are provided: a core-width test
certifying that clipped-linear marginals never need repair, and Euclidean
projection of the marginals onto the convex hull of valid size-k sets.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .core import IntervalVector

ENUM_MAX_N = 20

Pairs = tuple[tuple[int, int], ...]


def dominance_pairs(intervals: IntervalVector) -> Pairs:
    """All ordered pairs (i, j) whose intervals are strictly separated: lb_i > ub_j."""
    lb, ub = intervals.lb, intervals.ub
    n = lb.size
    out = []
    for i in range(n):
        for j in range(n):
            if i != j and lb[i] > ub[j]:
                out.append((i, j))
    return tuple(out)


def check_ex_post_valid(selected, pairs: Pairs) -> bool:
    """True iff every dominator of a selected candidate is itself selected."""
    members = set(int(i) for i in selected)
    return all(i in members for i, j in pairs if j in members)


def core_width_satisfied(
    intervals: IntervalVector, u: np.ndarray, alpha: float, tol: float = 1e-12
) -> bool:
    """True iff every interval reaches at least 1/(2 alpha) on both sides of its utility.

    When this holds, any two candidates whose intervals are strictly
    separated sit at least 1/alpha apart in utility, so the clipped-linear
    rule already gives the dominator p = 1 or the dominated p = 0 and every
    exactly-k draw is ex post valid as sampled.
    """
    if not alpha > 0:
        raise ValueError("slope must be positive")
    u = np.asarray(u, dtype=np.float64)
    h = 0.5 / alpha
    return bool(np.all(intervals.lb <= u - h + tol) and np.all(intervals.ub >= u + h - tol))


def valid_vertices(n: int, k: int, pairs: Pairs) -> list[tuple[int, ...]]:
    """Every ex post valid size-k subset, by exhaustive enumeration (n <= 20)."""
    if n > ENUM_MAX_N:
        raise ValueError(f"subset enumeration limited to n <= {ENUM_MAX_N}, got {n}")
    if not 1 <= k <= n:
        raise ValueError(f"budget k = {k} outside 1..{n}")
    dominators: dict[int, list[int]] = {}
    for i, j in pairs:
        dominators.setdefault(j, []).append(i)
    out = []
    for combo in combinations(range(n), k):
        members = set(combo)
        if all(d in members for j in combo for d in dominators.get(j, ())):
            out.append(combo)
    return out


def min_weight_valid_subset(weights: np.ndarray, pairs: Pairs, k: int) -> tuple[int, ...]:
    """Valid size-k set minimizing total weight; first in candidate order on ties."""
    weights = np.asarray(weights, dtype=np.float64)
    best = None
    best_w = np.inf
    for combo in valid_vertices(weights.size, k, pairs):
        w = float(weights[list(combo)].sum())
        if w < best_w:
            best, best_w = combo, w
    if best is None:
        raise ValueError(f"no ex post valid subset of size k = {k}")
    return best


def project_valid_marginals(
    p_lin: np.ndarray,
    pairs: Pairs,
    k: int,
    iterations: int = 4000,
    tol: float = 1e-12,
) -> tuple[np.ndarray, dict[tuple[int, ...], float]]:
    """Closest point to p_lin in the convex hull of valid sets, with its mixture.

    Pairwise Frank-Wolfe with exact line search on the half-squared distance:
    each step moves weight from the worst active vertex to the best vertex
    overall, so the objective never increases and the iterate stays an
    explicit convex combination of valid sets.  Stops when the duality gap
    drops below tol.
    """
    p_lin = np.asarray(p_lin, dtype=np.float64)
    n = p_lin.size
    sets = valid_vertices(n, k, pairs)
    if not sets:
        raise ValueError(f"no ex post valid subset of size k = {k}")
    V = np.zeros((len(sets), n))
    for r, combo in enumerate(sets):
        V[r, list(combo)] = 1.0

    start = int(np.argmin(V @ -p_lin))
    active: dict[int, float] = {start: 1.0}
    x = V[start].copy()
    for _ in range(iterations):
        g = x - p_lin
        vg = V @ g
        fw = int(np.argmin(vg))
        gap = float(g @ x - vg[fw])
        if gap <= tol:
            break
        away = max(active, key=lambda r: vg[r])
        d = V[fw] - V[away]
        denom = float(d @ d)
        if denom <= 0:
            break
        gamma_max = active[away]
        gamma = min((vg[away] - vg[fw]) / denom, gamma_max)
        x += gamma * d
        if gamma >= gamma_max:
            del active[away]
        else:
            active[away] = gamma_max - gamma
        active[fw] = active.get(fw, 0.0) + gamma

    # rebuild from the certificate so the output is exactly the stated mixture
    total = sum(active.values())
    mixture = {sets[r]: w / total for r, w in active.items() if w / total > 0}
    x = np.zeros(n)
    for combo, w in mixture.items():
        x[list(combo)] += w
    return x, mixture

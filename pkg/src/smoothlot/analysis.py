"""Evaluation tools: regret, closed-form bounds, and empirical smoothness searches.

Regret compares a lottery's expected selected utility against the best
possible size-k set.  The searches measure realized smoothness directly:
`perturbation_search` tries every single-review one-tick edit, and
`tightness_search` scans near-worst-case utility profiles where theory says
the smoothness budget should be nearly spent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .baselines import ThresholdPolicy, thresholded_lottery_marginals
from .clipped import clipped_linear_marginals, slope_from_smoothness
from .core import BUDGET_TOL, ReviewMatrix, UtilitySpec, leave_one_out_intervals, utility
from .softmax import (
    gumbel_noise,
    softmax_marginals_mc,
    softmax_regret_mc,
    temperature_from_smoothness,
)


@dataclass(frozen=True)
class PerturbationReport:
    """Worst single-entry one-tick edit found and the marginal movement it causes."""

    candidate: int
    review: int
    direction: int
    l1_change: float
    max_change: float
    ratio: float
    tick: float


@dataclass(frozen=True)
class TightnessReport:
    """Best smoothness ratio found on the near-worst-case profile family."""

    ratio: float
    stderr: float
    boundary_utility: float
    step: float
    direction: int


@dataclass(frozen=True)
class SweepRow:
    smoothness: float
    mechanism: str
    regret: float
    regret_per_k: float
    stderr: float


def regret(p: np.ndarray, u: np.ndarray, k: int) -> float:
    """Shortfall of expected selected utility against the best size-k set."""
    p = np.asarray(p, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if not 1 <= k <= u.size:
        raise ValueError(f"budget k = {k} outside 1..{u.size}")
    total = float(p.sum())
    if abs(total - k) > BUDGET_TOL:
        raise ValueError(f"marginals sum to {total}, expected {k}")
    opt = float(np.sort(u)[u.size - k :].sum())
    return opt - float(p @ u)


def regret_upper_bound_linear(k: int, n: int, lam: float, L: float) -> float:
    """Worst-case regret guarantee for the clipped linear lottery."""
    if not (k >= 1 and n >= k and lam > 0 and L > 0):
        raise ValueError("need 1 <= k <= n and positive lam, L")
    return k * (1.0 - k / n) * lam / (2.0 * L)


def regret_lower_bound(k: int, n: int, lower_lipschitz: float, L: float) -> float:
    """Regret every L-smooth rule must pay, for utilities with the given lower slack.

    For mean aggregation the slack constant is 1/m.  Piecewise in L: above
    the knee the bound decays as 1/L, below it the rule is effectively
    uniform on the contested tail.
    """
    if not (k >= 1 and n >= k and lower_lipschitz > 0 and L > 0):
        raise ValueError("need 1 <= k <= n and positive constants")
    c = lower_lipschitz
    slack = 1.0 - k / n
    if L >= c * slack:
        return k * c * slack * slack / (2.0 * L)
    return k * (slack - L / (2.0 * c))


def softmax_regret_bound(k: int, n: int, tau: float) -> float:
    """Worst-case regret guarantee for the top-k softmax lottery."""
    if not (k >= 1 and n >= k and tau > 0):
        raise ValueError("need 1 <= k <= n and positive temperature")
    return k * tau * math.log(n)


def metric_dp_marginal_bound(eps: float, k: int, d: float) -> tuple[float, float]:
    """(exact, linearized) marginal movement bounds for an eps-metric-DP rule at distance d."""
    if eps < 0 or d < 0:
        raise ValueError("privacy parameter and distance must be nonnegative")
    return 2.0 * k * math.tanh(eps * d / 2.0), eps * k * d


def perturbation_search(mechanism, X: ReviewMatrix, tick: float | None = None) -> PerturbationReport:
    """Worst single-review one-tick perturbation by exhaustive search.

    Tries both directions on every entry; directions that would leave [0, 1]
    are skipped so every tried edit moves the matrix by exactly one tick.
    The mechanism must be deterministic (fix seeds or noise up front).
    """
    if tick is None:
        tick = X.tick
    if not tick > 0:
        raise ValueError("tick must be positive")
    base = np.asarray(mechanism(X), dtype=np.float64)
    best: PerturbationReport | None = None
    for i in range(X.n):
        row = X.rows[i]
        for j in range(row.size):
            for direction in (1, -1):
                x2 = row[j] + direction * tick
                if x2 < -1e-12 or x2 > 1.0 + 1e-12:
                    continue
                x2 = min(max(x2, 0.0), 1.0)
                try:
                    p2 = np.asarray(mechanism(X.with_entry(i, j, x2)), dtype=np.float64)
                except ValueError:
                    # the edited matrix can be infeasible for tier mechanisms
                    continue
                diff = np.abs(p2 - base)
                l1 = float(diff.sum())
                if best is None or l1 > best.l1_change:
                    best = PerturbationReport(
                        candidate=i,
                        review=j,
                        direction=direction,
                        l1_change=l1,
                        max_change=float(diff.max()),
                        ratio=l1 / tick,
                        tick=tick,
                    )
    if best is None:
        raise ValueError("no feasible single-entry perturbation")
    return best


def tightness_profile(n: int, k: int, boundary: float) -> np.ndarray:
    """Utilities 1 above the cut, `boundary` at the cut, 0 below."""
    if not 1 <= k <= n:
        raise ValueError(f"budget k = {k} outside 1..{n}")
    if not 0.0 <= boundary <= 1.0:
        raise ValueError("boundary utility must lie in [0, 1]")
    u = np.zeros(n)
    u[: k - 1] = 1.0
    u[k - 1] = boundary
    return u


def tightness_search(
    mechanism: str,
    n: int,
    k: int,
    L: float,
    boundary_grid,
    step_grid,
    draws: int = 100_000,
    seed=None,
    batch: int = 2048,
) -> TightnessReport:
    """Scan the boundary-candidate profile family for the largest smoothness ratio.

    Utilities are fed as single-review rows, so the mechanism's slope or
    temperature is set with unit review-to-utility slack.  The softmax path
    reuses one set of Gumbel draws for the whole scan: only the boundary
    candidate's utility varies, so each perturbation's marginal movement is
    exactly twice the fraction of draws whose selection threshold falls
    inside the perturbed bracket.
    """
    boundary_grid = [float(b) for b in boundary_grid]
    step_grid = [float(e) for e in step_grid]
    if not boundary_grid or not step_grid:
        raise ValueError("need nonempty boundary and step grids")
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k = {k}, n = {n}")

    best: TightnessReport | None = None
    if mechanism == "clipped":
        alpha = slope_from_smoothness(L, 1.0)
        cache: dict[float, np.ndarray] = {}

        def marginals(b: float) -> np.ndarray:
            if b not in cache:
                cache[b] = clipped_linear_marginals(tightness_profile(n, k, b), alpha, k).p
            return cache[b]

        for b in boundary_grid:
            p0 = marginals(b)
            for eps in step_grid:
                for direction in (1, -1):
                    b2 = b + direction * eps
                    if not 0.0 <= b2 <= 1.0:
                        continue
                    ratio = float(np.abs(marginals(b2) - p0).sum()) / eps
                    if best is None or ratio > best.ratio:
                        best = TightnessReport(ratio, 0.0, b, eps, direction)
    elif mechanism == "softmax":
        tau = temperature_from_smoothness(L, 1.0)
        rng = np.random.default_rng(seed)
        others = np.concatenate([np.ones(k - 1), np.zeros(n - k)])
        # threshold for the boundary candidate: k-th largest noisy utility
        # among the other n-1 candidates, minus the candidate's own noise
        t = np.empty(draws)
        done = 0
        while done < draws:
            m = min(batch, draws - done)
            y = others[None, :] + gumbel_noise(rng, (m, n - 1), tau)
            own = gumbel_noise(rng, m, tau)
            t[done : done + m] = _kernels.row_kth_largest(y, k) - own
            done += m
        t.sort()
        for b in boundary_grid:
            for eps in step_grid:
                for direction in (1, -1):
                    b2 = b + direction * eps
                    if not 0.0 <= b2 <= 1.0:
                        continue
                    lo, hi = min(b, b2), max(b, b2)
                    flips = int(
                        np.searchsorted(t, hi, side="right")
                        - np.searchsorted(t, lo, side="right")
                    )
                    frac = flips / draws
                    ratio = 2.0 * frac / eps
                    se = 2.0 * math.sqrt(frac * (1.0 - frac) / draws) / eps
                    if best is None or ratio > best.ratio:
                        best = TightnessReport(ratio, se, b, eps, direction)
    else:
        raise ValueError(f"unknown mechanism {mechanism!r}")
    if best is None:
        raise ValueError("every grid combination stepped outside [0, 1]")
    return best


def regret_smoothness_sweep(
    X: ReviewMatrix,
    mechanisms,
    smoothness_grid,
    k: int,
    seed=None,
    draws: int = 10_000,
    kind: str = "mean",
) -> list[SweepRow]:
    """Regret per mechanism over a grid of target smoothness values.

    Clipped-linear rows are exact; softmax rows are Monte Carlo with the
    reported standard error.  Child seeds are spawned per grid cell so the
    table is reproducible and cells are independent.
    """
    spec = UtilitySpec.for_counts(kind, X.counts)
    u = utility(X, spec)
    grid = [float(L) for L in smoothness_grid]
    mechanisms = list(mechanisms)
    children = np.random.SeedSequence(seed).spawn(len(grid) * len(mechanisms))
    rows = []
    for a, L in enumerate(grid):
        for b, mech in enumerate(mechanisms):
            child = children[a * len(mechanisms) + b]
            if mech == "clipped":
                p = clipped_linear_marginals(u, slope_from_smoothness(L, spec.lipschitz), k).p
                r = regret(p, u, k)
                se = 0.0
            elif mech == "softmax":
                tau = temperature_from_smoothness(L, spec.lipschitz)
                r, se = softmax_regret_mc(u, tau, k, draws, child)
            else:
                raise ValueError(f"unknown mechanism {mech!r}")
            rows.append(SweepRow(L, mech, r, r / k, se))
    return rows


def default_smoothness_grid(m: int, points: int = 10) -> np.ndarray:
    """Logarithmic grid spanning [0.1/m, 10/m], centered on the mean's own slack 1/m."""
    if not (m >= 1 and points >= 1):
        raise ValueError("need m >= 1 and at least one point")
    return np.geomspace(0.1 / m, 10.0 / m, points)


def check_individual_fairness(p: np.ndarray, u: np.ndarray, alpha: float, tol: float = 1e-9) -> bool:
    """All-pairs check that probability gaps are within alpha times utility gaps."""
    p = np.asarray(p, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    dp = np.abs(p[:, None] - p[None, :])
    du = np.abs(u[:, None] - u[None, :])
    return bool(np.all(dp <= alpha * du + tol))


def synthetic_beta_reviews(n: int, m: int, a: float = 2.0, levels: int = 10, seed=None) -> ReviewMatrix:
    """i.i.d. symmetric Beta scores rounded to `levels` equally spaced values in [0, 1]."""
    if not (n >= 1 and m >= 1 and a > 0 and levels >= 2):
        raise ValueError("need positive sizes, shape > 0, and at least two levels")
    rng = np.random.default_rng(seed)
    raw = rng.beta(a, a, size=(n, m))
    scores = np.round(raw * (levels - 1)) / (levels - 1)
    return ReviewMatrix(rows=tuple(scores[i] for i in range(n)), tick=1.0 / (levels - 1))


def make_clipped_mechanism(k: int, L: float, kind: str = "mean"):
    """Deterministic handle: review matrix to clipped-linear marginals at smoothness L."""

    def mech(X: ReviewMatrix) -> np.ndarray:
        spec = UtilitySpec.for_counts(kind, X.counts)
        return clipped_linear_marginals(utility(X, spec), slope_from_smoothness(L, spec.lipschitz), k).p

    return mech


def make_softmax_mechanism(
    k: int, L: float, draws: int, seed, kind: str = "mean", shared_noise: bool = True
):
    """Monte Carlo softmax handle with noise fixed up front.

    With shared_noise the same Gumbel draws are reused for every matrix the
    handle is called on, so perturbation differences are not drowned in
    resampling noise.
    """
    cache: dict[int, np.ndarray] = {}

    def mech(X: ReviewMatrix) -> np.ndarray:
        spec = UtilitySpec.for_counts(kind, X.counts)
        tau = temperature_from_smoothness(L, spec.lipschitz)
        u = utility(X, spec)
        if not shared_noise:
            return softmax_marginals_mc(u, tau, k, draws, seed).p
        if X.n not in cache:
            rng = np.random.default_rng(seed)
            cache[X.n] = gumbel_noise(rng, (draws, X.n), 1.0)
        y = u[None, :] + tau * cache[X.n]
        return _kernels.topk_counts(y, k) / draws

    return mech


def make_threshold_mechanism(k: int, policy: ThresholdPolicy | None = None, kind: str = "mean"):
    """Three-tier lottery handle; interval mode uses leave-one-out review intervals."""

    def mech(X: ReviewMatrix) -> np.ndarray:
        u = utility(X, UtilitySpec.for_counts(kind, X.counts))
        if policy is not None and policy.mode == "explicit":
            return thresholded_lottery_marginals(u, k, policy=policy)
        return thresholded_lottery_marginals(u, k, intervals=leave_one_out_intervals(X))

    return mech

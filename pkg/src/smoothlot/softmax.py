"""Top-k softmax lottery: Gumbel-top-k sampling and exact small-n marginals.

Adding i.i.d. Gumbel(0, tau) noise to utilities and keeping the k largest
draws from the same law as sequentially sampling k items without replacement
from the temperature-tau softmax.  Sampling is Monte Carlo; for n <= 10 the
set distribution is also computed exactly by dynamic programming over
subsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _kernels

EXACT_MAX_N = 10

# keeps log(-log(U)) finite; rng.random() already excludes 1.0
_U_LO = np.finfo(np.float64).tiny
_U_HI = 1.0 - np.finfo(np.float64).eps


@dataclass(frozen=True)
class McMarginals:
    p: np.ndarray
    stderr: np.ndarray
    draws: int
    k: int


def temperature_from_smoothness(L: float, lam: float) -> float:
    """Temperature at which the softmax marginals are L-smooth in the matrix metric."""
    if not (L > 0 and lam > 0):
        raise ValueError("smoothness target and Lipschitz constant must be positive")
    return 2.0 * lam / (math.e * L)


def gumbel_noise(rng: np.random.Generator, shape, tau: float) -> np.ndarray:
    u = np.clip(rng.random(shape), _U_LO, _U_HI)
    return -tau * np.log(-np.log(u))


def _check_args(n: int, tau: float, k: int):
    if not tau > 0:
        raise ValueError("temperature must be positive")
    if not 1 <= k <= n:
        raise ValueError(f"budget k = {k} outside 1..{n}")


def gumbel_topk_sample(u: np.ndarray, tau: float, k: int, rng) -> np.ndarray:
    """One size-k draw: indices of the k largest noisy utilities, ascending."""
    u = np.asarray(u, dtype=np.float64)
    _check_args(u.size, tau, k)
    rng = np.random.default_rng(rng)
    y = u + gumbel_noise(rng, u.size, tau)
    idx = np.argpartition(y, u.size - k)[u.size - k :]
    return np.sort(idx)


def softmax_marginals_mc(
    u: np.ndarray,
    tau: float,
    k: int,
    draws: int,
    seed,
    batch: int = 4096,
) -> McMarginals:
    """Empirical inclusion frequencies over independent Gumbel-top-k draws."""
    u = np.asarray(u, dtype=np.float64)
    n = u.size
    _check_args(n, tau, k)
    if draws < 1:
        raise ValueError("need at least one draw")
    rng = np.random.default_rng(seed)
    counts = np.zeros(n, dtype=np.int64)
    done = 0
    while done < draws:
        b = min(batch, draws - done)
        y = u[None, :] + gumbel_noise(rng, (b, n), tau)
        counts += _kernels.topk_counts(y, k)
        done += b
    p = counts / draws
    stderr = np.sqrt(p * (1.0 - p) / draws)
    return McMarginals(p=p, stderr=stderr, draws=draws, k=k)


def softmax_marginals_exact(u: np.ndarray, tau: float, k: int):
    """(marginals, set distribution) of sequential softmax sampling without replacement.

    Subset dynamic program: the probability of having drawn exactly the set S
    after |S| steps is the sum over its possible last elements.  Feasible for
    n <= 10.
    """
    u = np.asarray(u, dtype=np.float64)
    n = u.size
    _check_args(n, tau, k)
    if n > EXACT_MAX_N:
        raise ValueError(f"exact enumeration limited to n <= {EXACT_MAX_N}, got {n}")
    scaled = u / tau
    w = np.exp(scaled - scaled.max())
    total = float(w.sum())

    prev = {frozenset(): 1.0}
    for _ in range(k):
        nxt: dict[frozenset, float] = {}
        for s, mass in prev.items():
            rem = total - sum(w[i] for i in s)
            for i in range(n):
                if i in s:
                    continue
                s2 = s | {i}
                nxt[s2] = nxt.get(s2, 0.0) + mass * w[i] / rem
        prev = nxt

    sets = {tuple(sorted(s)): q for s, q in prev.items()}
    p = np.zeros(n)
    for s, q in sets.items():
        for i in s:
            p[i] += q
    return p, sets


def check_set_distribution(sets: dict, k: int, tol: float = 1e-9):
    total = 0.0
    for s, q in sets.items():
        if len(s) != k:
            raise ValueError(f"set {s} has size {len(s)}, expected {k}")
        if q < -tol:
            raise ValueError(f"set {s} has negative probability {q}")
        total += q
    if abs(total - 1.0) > tol:
        raise ValueError(f"set probabilities sum to {total}, expected 1")


def softmax_regret_mc(
    u: np.ndarray,
    tau: float,
    k: int,
    draws: int,
    seed,
    batch: int = 4096,
) -> tuple[float, float]:
    """(regret estimate, standard error) over Monte Carlo Gumbel-top-k draws."""
    u = np.asarray(u, dtype=np.float64)
    n = u.size
    _check_args(n, tau, k)
    if draws < 1:
        raise ValueError("need at least one draw")
    opt = float(np.sort(u)[n - k :].sum())
    rng = np.random.default_rng(seed)
    tot = 0.0
    tot_sq = 0.0
    done = 0
    while done < draws:
        b = min(batch, draws - done)
        y = u[None, :] + gumbel_noise(rng, (b, n), tau)
        thr = _kernels.row_kth_largest(y, k)
        vals = np.where(y >= thr[:, None], u[None, :], 0.0).sum(axis=1)
        tot += float(vals.sum())
        tot_sq += float((vals * vals).sum())
        done += b
    mean = tot / draws
    var = max(tot_sq / draws - mean * mean, 0.0) * draws / max(draws - 1, 1)
    stderr = math.sqrt(var / draws)
    return opt - mean, stderr

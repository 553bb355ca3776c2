import math

import numpy as np
import pytest

from smoothlot.softmax import (
    check_set_distribution,
    gumbel_topk_sample,
    softmax_marginals_exact,
    softmax_marginals_mc,
    softmax_regret_mc,
    temperature_from_smoothness,
)


def test_temperature_from_smoothness():
    assert temperature_from_smoothness(1.0, 1.0) == pytest.approx(2 / math.e, abs=1e-15)
    assert temperature_from_smoothness(1 / 3, 1 / 3) == pytest.approx(2 / math.e, abs=1e-15)
    assert temperature_from_smoothness(0.5, 1.0) == pytest.approx(
        2 * temperature_from_smoothness(1.0, 1.0), abs=1e-15
    )
    with pytest.raises(ValueError):
        temperature_from_smoothness(0.0, 1.0)


def test_sample_forced_full_set():
    got = gumbel_topk_sample(np.array([0.4, 0.1, 0.9]), 0.5, 3, 7)
    assert got.tolist() == [0, 1, 2]


def test_sample_is_deterministic_given_seed():
    u = np.array([0.2, 0.8, 0.5, 0.1])
    a = gumbel_topk_sample(u, 0.3, 2, 99)
    b = gumbel_topk_sample(u, 0.3, 2, 99)
    assert np.array_equal(a, b)


def test_two_point_softmax_frequency():
    # u2 - u1 = tau ln 3 puts item 2 at probability 3/4
    tau = 0.4
    u = np.array([0.0, tau * math.log(3.0)])
    est = softmax_marginals_mc(u, tau, 1, 100_000, seed=11)
    assert est.p[1] == pytest.approx(0.75, abs=4 * math.sqrt(0.75 * 0.25 / 100_000))


def test_mc_symmetry_and_budget():
    est = softmax_marginals_mc(np.zeros(3), 0.7, 2, 50_000, seed=2)
    assert est.p.sum() == pytest.approx(2.0, abs=1e-12)
    assert np.all(np.abs(est.p - 2 / 3) <= 4 * est.stderr + 1e-12)


def test_mc_dominant_utility():
    est = softmax_marginals_mc(np.array([0.0, 0.0, 0.0, 10 * 0.05]), 0.05, 2, 50_000, seed=3)
    assert est.p[3] >= 1.0 - 4 * math.sqrt(0.25 / 50_000)


def test_mc_rejects_zero_draws():
    with pytest.raises(ValueError):
        softmax_marginals_mc(np.zeros(3), 0.5, 1, 0, seed=0)


def test_exact_two_point():
    tau = 0.9
    p, sets = softmax_marginals_exact(np.array([0.0, tau * math.log(3.0)]), tau, 1)
    assert np.allclose(p, [0.25, 0.75], atol=1e-12)
    check_set_distribution(sets, 1)


def test_exact_symmetry():
    p, sets = softmax_marginals_exact(np.zeros(3), 0.4, 2)
    assert np.allclose(p, 2 / 3, atol=1e-12)
    assert len(sets) == 3
    check_set_distribution(sets, 2)


def test_exact_rejects_large_n():
    with pytest.raises(ValueError):
        softmax_marginals_exact(np.zeros(11), 0.4, 2)


def test_exact_matches_gumbel_topk_set_distribution():
    # the sequential rule and the noisy-argmax rule share one set law
    rng = np.random.default_rng(31)
    u = rng.random(4)
    tau = 0.35
    k = 2
    _, sets = softmax_marginals_exact(u, tau, k)
    draws = 100_000
    counts = {s: 0 for s in sets}
    for seed, block in enumerate(range(4)):
        g = -tau * np.log(-np.log(rng.random((draws // 4, 4))))
        top = np.argpartition(u[None, :] + g, 2, axis=1)[:, 2:]
        for row in top:
            counts[tuple(sorted(row.tolist()))] += 1
    for s, q in sets.items():
        sigma = math.sqrt(q * (1 - q) / draws)
        assert counts[s] / draws == pytest.approx(q, abs=max(4 * sigma, 1e-12))


def test_full_support():
    p, _ = softmax_marginals_exact(np.array([0.0, 0.0, 1.0]), 0.05, 1)
    assert np.all(p > 0.0)


def test_exact_smoothness_bound():
    # ||p(u) - p(u')||_1 <= (2 / (e tau)) ||u - u'||_1
    rng = np.random.default_rng(13)
    for _ in range(300):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n + 1))
        tau = float(rng.uniform(0.05, 1.0))
        u = rng.random(n)
        v = rng.random(n)
        pu, _ = softmax_marginals_exact(u, tau, k)
        pv, _ = softmax_marginals_exact(v, tau, k)
        assert np.abs(pu - pv).sum() <= (2 / (math.e * tau)) * np.abs(u - v).sum() + 1e-9


def test_regret_mc_matches_exact_expectation():
    rng = np.random.default_rng(8)
    u = rng.random(5)
    tau, k = 0.3, 2
    p, _ = softmax_marginals_exact(u, tau, k)
    exact = float(np.sort(u)[-k:].sum() - p @ u)
    est, se = softmax_regret_mc(u, tau, k, 200_000, seed=21)
    assert est == pytest.approx(exact, abs=max(4 * se, 1e-3))
    assert est >= 0.0

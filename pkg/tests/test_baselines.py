import math

import numpy as np
import pytest

from smoothlot.baselines import (
    ThresholdPolicy,
    funding_line,
    randomized_response_rule,
    thresholded_lottery_marginals,
    tiers,
)
from smoothlot.core import IntervalVector, ReviewMatrix

TOY_SCORES = np.array([0.18, 0.26, 0.34, 0.42, 0.47, 0.56, 0.68, 0.84])


def toy_intervals(scores):
    return IntervalVector(scores - 0.15, scores + 0.15)


def test_funding_line_rank_and_ties():
    assert funding_line(TOY_SCORES, 2) == pytest.approx(0.68)
    assert funding_line(np.array([0.5, 0.7, 0.7, 0.2]), 2) == 0.7
    # rank ties broken by index: both rank-1 and rank-2 are the value 0.7
    assert funding_line(np.array([0.7, 0.7]), 1) == 0.7


def test_toy_lottery_before():
    p = thresholded_lottery_marginals(TOY_SCORES, 2, intervals=toy_intervals(TOY_SCORES))
    assert np.allclose(p, [0, 0, 0, 0, 0, 0.5, 0.5, 1], atol=1e-12)


def test_toy_lottery_after_fifth_score_rises():
    scores = TOY_SCORES.copy()
    scores[4] = 0.53
    p = thresholded_lottery_marginals(scores, 2, intervals=toy_intervals(scores))
    assert np.allclose(p, [0, 0, 0, 0, 1 / 3, 1 / 3, 1 / 3, 1], atol=1e-12)


def test_disjoint_intervals_give_top_k():
    u = np.array([0.1, 0.4, 0.7, 1.0])
    iv = IntervalVector(u - 0.01, u + 0.01)
    p = thresholded_lottery_marginals(u, 2, intervals=iv)
    assert np.array_equal(p, [0, 0, 1, 1])


def test_explicit_mode_tiers():
    u = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
    policy = ThresholdPolicy("explicit", t_lo=0.25, t_hi=0.75)
    accept, pool, reject = tiers(u, 2, policy=policy)
    assert accept.tolist() == [4] and reject.tolist() == [0]
    p = thresholded_lottery_marginals(u, 2, policy=policy)
    assert np.allclose(p, [0, 1 / 3, 1 / 3, 1 / 3, 1], atol=1e-12)


def test_policy_validation():
    with pytest.raises(ValueError):
        ThresholdPolicy("explicit", t_lo=0.8, t_hi=0.2)
    with pytest.raises(ValueError):
        ThresholdPolicy("sorted")
    with pytest.raises(ValueError):
        ThresholdPolicy("explicit", t_lo=0.2)


def test_infeasible_tiers_report_sizes():
    # funding line sits at rank-1 utility 0.95; two lower bounds clear it
    with pytest.raises(ValueError, match=r"\|accept\| = 2"):
        thresholded_lottery_marginals(
            np.array([0.9, 0.95, 0.1]),
            1,
            intervals=IntervalVector(np.array([0.96, 0.97, 0.0]), np.array([0.98, 0.99, 0.2])),
        )


def test_budget_always_satisfied_when_feasible():
    rng = np.random.default_rng(6)
    done = 0
    while done < 500:
        n = int(rng.integers(3, 12))
        k = int(rng.integers(1, n))
        u = rng.random(n)
        width = rng.uniform(0.0, 0.3, n)
        iv = IntervalVector(np.clip(u - width, 0, 1), np.clip(u + width, 0, 1))
        try:
            p = thresholded_lottery_marginals(u, k, intervals=iv)
        except ValueError:
            continue
        assert abs(p.sum() - k) <= 1e-9
        done += 1


def test_tier_boundary_discontinuity():
    # nudging one score across the funding line moves probabilities by a constant
    u = np.array([0.2, 0.5, 0.8])
    iv = IntervalVector(u - 0.05, u + 0.05)
    p_before = thresholded_lottery_marginals(u, 1, intervals=iv)
    u2 = u.copy()
    u2[1] = 0.7500000001  # interval now touches the line
    iv2 = IntervalVector(u2 - 0.05, u2 + 0.05)
    p_after = thresholded_lottery_marginals(u2, 1, intervals=iv2)
    assert np.abs(p_after - p_before).sum() >= 0.5


def rr_matrix(x11: float, n: int = 4) -> ReviewMatrix:
    rows = [np.array([x11])] + [np.array([0.5]) for _ in range(n - 1)]
    return ReviewMatrix(rows=tuple(rows), tick=0.1)


def test_rr_zero_eps_is_fair_coin():
    sets, p = randomized_response_rule(rr_matrix(0.9), 0.0, 2)
    assert sets[(0, 1)] == pytest.approx(0.5) and sets[(2, 3)] == pytest.approx(0.5)
    assert np.allclose(p, [0.5, 0.5, 0.5, 0.5])


def test_rr_worked_example():
    sets, p = randomized_response_rule(rr_matrix(0.4, n=2), math.log(3.0), 1)
    assert p[0] == pytest.approx(0.75, abs=1e-12)
    assert p[1] == pytest.approx(0.25, abs=1e-12)


def test_rr_threshold_crossing_moves_mass_by_tanh():
    eps = math.log(3.0)
    for delta in (1e-1, 1e-4, 1e-9):
        _, lo = randomized_response_rule(rr_matrix(0.5 - delta), eps, 2)
        _, hi = randomized_response_rule(rr_matrix(0.5 + delta), eps, 2)
        assert np.abs(hi - lo).sum() == pytest.approx(2 * 2 * math.tanh(eps / 2), abs=1e-12)


def test_rr_needs_two_disjoint_blocks():
    with pytest.raises(ValueError):
        randomized_response_rule(rr_matrix(0.4, n=3), 1.0, 2)


def test_rr_likelihood_ratio_bounded_by_exp_eps():
    # neighboring matrices differ in the one score the rule reads
    eps = 0.7
    for a, b in [(0.3, 0.6), (0.49, 0.51), (0.1, 0.2)]:
        s1, _ = randomized_response_rule(rr_matrix(a), eps, 2)
        s2, _ = randomized_response_rule(rr_matrix(b), eps, 2)
        for outcome in s1:
            ratio = s1[outcome] / s2[outcome]
            assert ratio <= math.exp(eps) + 1e-12
            assert ratio >= math.exp(-eps) - 1e-12

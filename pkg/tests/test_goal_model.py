import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uclincentive.goal_model import (
    FITTED,
    POTS,
    GoalModelParams,
    Scoreline,
    cdf_table,
    intensity_table,
    lambda_away,
    lambda_home,
    sample_scoreline,
    sample_scorelines,
    score_pmf,
    truncated_pmf,
)
from uclincentive.rng import Stream

PAIRS = [(h, a) for h in POTS for a in POTS]


@pytest.mark.parametrize(
    "home, away, expected",
    [
        (1, 4, math.exp(0.4242 + 3 * 0.1693)),  # 2.5398
        (2, 2, math.exp(0.4242)),  # 1.5284
        (4, 1, math.exp(0.4242 - 3 * 0.1693)),  # 0.9197
    ],
)
def test_lambda_home_examples(home, away, expected):
    assert lambda_home(FITTED, home, away) == pytest.approx(expected, rel=1e-12)


def test_lambda_home_frozen_values():
    assert lambda_home(FITTED, 1, 4) == pytest.approx(2.5398, abs=1e-4)
    assert lambda_home(FITTED, 2, 2) == pytest.approx(1.5284, abs=1e-4)
    assert lambda_home(FITTED, 4, 1) == pytest.approx(0.91971, abs=1e-5)


@pytest.mark.parametrize(
    "home, away, expected",
    [(1, 4, 0.659812), (3, 3, 1.114048), (4, 1, 1.880993)],
)
def test_lambda_away_examples(home, away, expected):
    assert lambda_away(FITTED, home, away) == pytest.approx(expected, abs=1e-6)


def test_intensity_extremes_over_all_pairs():
    table = intensity_table()
    assert len(table) == 16
    homes = [v[0] for v in table.values()]
    aways = [v[1] for v in table.values()]
    assert all(0 < x < math.inf for x in homes + aways)
    assert max(homes) == pytest.approx(math.exp(0.9321), rel=1e-12)
    assert max(aways) == pytest.approx(math.exp(0.6318), rel=1e-12)


@pytest.mark.parametrize("home, away", PAIRS)
def test_swapping_pots_flips_the_gap(home, away):
    gap = home - away
    assert lambda_home(FITTED, home, away) == pytest.approx(math.exp(0.4242 - 0.1693 * gap))
    assert lambda_home(FITTED, away, home) == pytest.approx(math.exp(0.4242 + 0.1693 * gap))
    assert lambda_home(FITTED, home, away) * lambda_home(FITTED, away, home) == pytest.approx(
        math.exp(2 * 0.4242)
    )


def test_monotone_in_ratings():
    for away in POTS:
        vals = [lambda_home(FITTED, h, away) for h in POTS]
        assert all(a > b for a, b in zip(vals, vals[1:]))
    for home in POTS:
        vals = [lambda_home(FITTED, home, a) for a in POTS]
        assert all(a < b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("bad", [0, 5, -1, 2.5, True])
def test_invalid_pot_rejected(bad):
    with pytest.raises(ValueError):
        lambda_home(FITTED, bad, 1)


def test_params_override():
    p = GoalModelParams.from_mapping({"alpha_home": "0.0", "beta_home": "0"})
    assert lambda_home(p, 1, 4) == 1.0
    assert p.alpha_away == FITTED.alpha_away


def test_score_pmf_examples():
    assert score_pmf(1.0, 1) == pytest.approx(math.exp(-1), rel=1e-14)
    for lam in (0.3, 1.0, 2.5398):
        assert score_pmf(lam, 0) == pytest.approx(math.exp(-lam), rel=1e-14)


@pytest.mark.parametrize("home, away", PAIRS)
def test_pmf_sums_to_one_at_25(home, away):
    for lam in intensity_table()[(home, away)]:
        assert abs(math.fsum(score_pmf(lam, m) for m in range(26)) - 1.0) < 1e-10


@given(st.floats(0.05, 3.0), st.integers(0, 4))
def test_truncated_pmf_is_a_distribution(lam, cap):
    p = truncated_pmf(lam, cap)
    assert len(p) == cap + 1
    assert abs(math.fsum(p) - 1.0) < 1e-15
    assert (p > 0).all()


def test_cdf_table_matches_pmf():
    lam = lambda_home(FITTED, 1, 4)
    t = cdf_table(lam)
    assert t[-1] == 1.0
    assert np.all(np.diff(t) >= 0)
    cum = np.cumsum([score_pmf(lam, m) for m in range(20)])
    assert np.allclose(t[:20], cum, atol=1e-14)


def test_truncated_cdf_table_never_exceeds_cap():
    t = cdf_table(2.0, goal_cap=2)
    assert t[2] == 1.0
    hg, ag = sample_scorelines(FITTED, 1, 4, 20000, goal_cap=2)
    assert hg.max() <= 2 and ag.max() <= 2


def test_scoreline_rejects_negative_goals():
    with pytest.raises(ValueError):
        Scoreline(-1, 0)


def test_sample_scoreline_deterministic_and_matches_vectorised():
    a = sample_scoreline(FITTED, 2, 3, Stream(5, 0))
    b = sample_scoreline(FITTED, 2, 3, Stream(5, 0))
    assert a == b
    hg, ag = sample_scorelines(FITTED, 2, 3, 300, master_seed=5)
    for i in range(300):
        s = sample_scoreline(FITTED, 2, 3, Stream(5, i))
        assert (s.home_goals, s.away_goals) == (hg[i], ag[i])


def test_sample_scoreline_consumes_two_uniforms():
    s = Stream(1, 1)
    sample_scoreline(FITTED, 1, 2, s)
    assert s.counter == 2


N = 10**6


def test_home_mean_pot1_vs_pot4():
    hg, _ = sample_scorelines(FITTED, 1, 4, N, master_seed=11)
    lam = lambda_home(FITTED, 1, 4)
    se = math.sqrt(lam / N)
    assert abs(hg.mean() - 2.5398) < 3 * se + 1e-4


def test_goalless_draw_probability_pot2_vs_pot3():
    hg, ag = sample_scorelines(FITTED, 2, 3, N, master_seed=12)
    p = math.exp(-lambda_home(FITTED, 2, 3)) * math.exp(-lambda_away(FITTED, 2, 3))
    est = np.mean((hg == 0) & (ag == 0))
    assert abs(est - p) < 3 * math.sqrt(p * (1 - p) / N)


@pytest.mark.parametrize("home, away", [(1, 4), (4, 1), (2, 2)])
def test_sample_mean_and_variance_converge(home, away):
    hg, ag = sample_scorelines(FITTED, home, away, N, master_seed=home * 10 + away)
    for goals, lam in ((hg, lambda_home(FITTED, home, away)), (ag, lambda_away(FITTED, home, away))):
        se_mean = math.sqrt(lam / N)
        # var of the sample variance of a Poisson: (mu4 - sigma^4) / n = (lam + 2 lam^2) / n
        se_var = math.sqrt((lam + 2 * lam * lam) / N)
        assert abs(goals.mean() - lam) < 4 * se_mean
        assert abs(goals.var() - lam) < 4 * se_var


def test_goal_distribution_matches_pmf():
    hg, _ = sample_scorelines(FITTED, 3, 1, N, master_seed=4)
    lam = lambda_home(FITTED, 3, 1)
    counts = np.bincount(hg, minlength=6)[:6]
    for m in range(6):
        p = score_pmf(lam, m)
        assert abs(counts[m] / N - p) < 4.5 * math.sqrt(p * (1 - p) / N)

"""Independent Poisson goal model driven by seeding pots.

A team is represented only by its pot (1 = strongest, 4 = weakest). For a
match of the home team ``j`` against the away team ``k``::

    log(lambda_home) = alpha_home + beta_home * (R_j - R_k)
    log(lambda_away) = alpha_away + beta_away * (R_k - R_j)

The defaults are the fitted 4-parameter seeding coefficients. Same-pot
matches (gap zero) are an extrapolation: the historical fit never saw them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import Stream, bits_to_unit_array, draw_bits_array, replication_keys

POTS = (1, 2, 3, 4)

# Tail mass of Poisson(2.54) beyond 63 goals is far below double precision.
CDF_TABLE_SIZE = 64


def check_pot(pot: int) -> int:
    if isinstance(pot, bool) or int(pot) != pot or not 1 <= pot <= 4:
        raise ValueError(f"pot rating must be an integer in 1..4, got {pot!r}")
    return int(pot)


@dataclass(frozen=True)
class GoalModelParams:
    alpha_home: float = 0.4242
    beta_home: float = -0.1693
    alpha_away: float = 0.1080
    beta_away: float = -0.1746

    @classmethod
    def from_mapping(cls, values: dict) -> GoalModelParams:
        base = cls()
        kwargs = {}
        for name in ("alpha_home", "beta_home", "alpha_away", "beta_away"):
            kwargs[name] = float(values.get(name, getattr(base, name)))
        return cls(**kwargs)


FITTED = GoalModelParams()


@dataclass(frozen=True)
class Scoreline:
    home_goals: int
    away_goals: int

    def __post_init__(self):
        if self.home_goals < 0 or self.away_goals < 0:
            raise ValueError("goal counts must be non-negative")


def lambda_home(params: GoalModelParams, home: int, away: int) -> float:
    return math.exp(params.alpha_home + params.beta_home * (check_pot(home) - check_pot(away)))


def lambda_away(params: GoalModelParams, home: int, away: int) -> float:
    return math.exp(params.alpha_away + params.beta_away * (check_pot(away) - check_pot(home)))


def score_pmf(lam: float, m: int) -> float:
    if lam <= 0:
        raise ValueError("intensity must be positive")
    if m < 0:
        return 0.0
    return math.exp(m * math.log(lam) - lam - math.lgamma(m + 1))


def truncated_pmf(lam: float, cap: int) -> np.ndarray:
    """Poisson pmf on ``0..cap`` renormalised to sum to one."""
    p = np.array([score_pmf(lam, m) for m in range(cap + 1)])
    return p / p.sum()


def cdf_table(lam: float, goal_cap: int | None = None) -> np.ndarray:
    """Cumulative table used for inversion sampling.

    A draw ``u`` maps to the first ``m`` with ``u <= table[m]``. The last
    entry is pinned to 1.0 so the search always terminates. With
    ``goal_cap`` the distribution is truncated to ``0..goal_cap`` and
    renormalised.
    """
    if lam <= 0:
        raise ValueError("intensity must be positive")
    if goal_cap is not None:
        pmf = truncated_pmf(lam, goal_cap)
        table = np.full(CDF_TABLE_SIZE, 1.0)
        table[: goal_cap + 1] = np.cumsum(pmf)
        table[goal_cap] = 1.0
        return table
    table = np.empty(CDF_TABLE_SIZE)
    p = math.exp(-lam)
    acc = p
    table[0] = acc
    for m in range(1, CDF_TABLE_SIZE):
        p *= lam / m
        acc += p
        table[m] = acc
    table[-1] = 1.0
    return table


def invert_cdf(table: np.ndarray, u: float) -> int:
    m = 0
    while u > table[m]:
        m += 1
    return m


def sample_scoreline(
    params: GoalModelParams,
    home: int,
    away: int,
    stream: Stream,
    goal_cap: int | None = None,
) -> Scoreline:
    """Draw one scoreline; consumes two uniforms (home first) from ``stream``."""
    th = cdf_table(lambda_home(params, home, away), goal_cap)
    ta = cdf_table(lambda_away(params, home, away), goal_cap)
    return Scoreline(invert_cdf(th, stream.uniform()), invert_cdf(ta, stream.uniform()))


def sample_scorelines(
    params: GoalModelParams,
    home: int,
    away: int,
    size: int,
    master_seed: int = 0,
    goal_cap: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised draws; element ``i`` equals ``sample_scoreline`` on ``Stream(master_seed, i)``."""
    th = cdf_table(lambda_home(params, home, away), goal_cap)
    ta = cdf_table(lambda_away(params, home, away), goal_cap)
    u = bits_to_unit_array(draw_bits_array(replication_keys(master_seed, np.arange(size)), np.arange(2)))
    return np.searchsorted(th, u[:, 0], side="left"), np.searchsorted(ta, u[:, 1], side="left")


def intensity_table(params: GoalModelParams = FITTED) -> dict[tuple[int, int], tuple[float, float]]:
    """``(home_pot, away_pot) -> (lambda_home, lambda_away)`` for all 16 pairs."""
    return {
        (h, a): (lambda_home(params, h, a), lambda_away(params, h, a))
        for h in POTS
        for a in POTS
    }

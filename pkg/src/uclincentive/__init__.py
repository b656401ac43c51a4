"""Monte Carlo estimates of the incentive to attack in football tournaments.

Compares the old four-team double round-robin group with the 36-team
incomplete round-robin league by the ratio of the prize-probability gain from
a 1-0 win to the loss from a 0-1 defeat, both measured against a 0-0 draw.
"""

from ._accel import NUMBA_AVAILABLE
from .engine import (
    DegenerateDenominatorError,
    IncentiveResult,
    ProbTriple,
    Scenario,
    ThresholdSpec,
    aggregate_uplift,
    run_figure2,
    run_scenario,
    simulate_focal,
)
from .fixtures import (
    Fixture,
    MatchType,
    NoSuchMatchType,
    TeamId,
    focal_fixture,
    group_fixtures,
    league_fixtures,
)
from .goal_model import FITTED, GoalModelParams, Scoreline, lambda_away, lambda_home, sample_scoreline, score_pmf
from .oracle import MiniFormat, exact_prob_triple

__version__ = "0.1.0"

__all__ = [
    "NUMBA_AVAILABLE",
    "DegenerateDenominatorError",
    "FITTED",
    "Fixture",
    "GoalModelParams",
    "IncentiveResult",
    "MatchType",
    "MiniFormat",
    "NoSuchMatchType",
    "ProbTriple",
    "Scenario",
    "Scoreline",
    "TeamId",
    "ThresholdSpec",
    "aggregate_uplift",
    "exact_prob_triple",
    "focal_fixture",
    "group_fixtures",
    "lambda_away",
    "lambda_home",
    "league_fixtures",
    "run_figure2",
    "run_scenario",
    "sample_scoreline",
    "score_pmf",
    "simulate_focal",
]

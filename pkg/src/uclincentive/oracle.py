"""Exact conditional prize probabilities for miniature tournaments.

Every scoreline combination of the non-focal fixtures is enumerated under a
truncated, renormalised Poisson model, and residual ties are averaged out
exactly: a team sharing final tier positions ``a..b`` finishes in each of
them with equal probability. Rankings come from :mod:`standings`, not from
the simulation kernels, so this is an independent check of the engine.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .engine import HOME, SIDES, ProbTriple
from .fixtures import GROUP, LEAGUE, Fixture, Format, TeamId
from .goal_model import FITTED, GoalModelParams, Scoreline, lambda_away, lambda_home, truncated_pmf
from .standings import DEFAULT_POINTS, ScoredMatch, accumulate, group_tiers, league_tiers

MAX_ENUMERATION = 10**7


class EnumerationTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class MiniFormat:
    teams: tuple[TeamId, ...]
    fixtures: tuple[Fixture, ...]
    goal_cap: int = 3
    tie_rule: str = GROUP
    name: str = "mini"

    def __post_init__(self):
        if len(self.teams) > 4:
            raise ValueError("a mini format has at most 4 teams")
        if not 0 <= self.goal_cap <= 4:
            raise ValueError("goal cap must lie in 0..4")
        if len(self.fixtures) > 6:
            raise ValueError("a mini format has at most 5 non-focal fixtures")
        self.as_format()  # validates teams and tie rule

    @classmethod
    def from_pots(cls, pots, pairs, **kwargs) -> MiniFormat:
        """``pairs`` are (home position, away position) into ``pots``."""
        teams = tuple(TeamId(p, i) for i, p in enumerate(pots))
        return cls(teams, tuple(Fixture(teams[h], teams[a]) for h, a in pairs), **kwargs)

    def as_format(self) -> Format:
        return Format(self.name, self.teams, self.fixtures, self.tie_rule)

    def enumeration_size(self) -> int:
        return (self.goal_cap + 1) ** (2 * (len(self.fixtures) - 1))


def _prize_share(tiers: list[list[TeamId]], team: TeamId, cutoff: int) -> float:
    pos = 0
    for tier in tiers:
        if team in tier:
            above = max(0, min(cutoff - pos, len(tier)))
            return above / len(tier)
        pos += len(tier)
    raise KeyError(team)


def exact_prob_triple(
    mini: MiniFormat,
    focal: Fixture,
    cutoff: int,
    side: str = HOME,
    params: GoalModelParams = FITTED,
    points: tuple[int, int, int] = DEFAULT_POINTS,
) -> ProbTriple:
    if side not in SIDES:
        raise ValueError("side must be 'home' or 'away'")
    if focal not in mini.fixtures:
        raise ValueError(f"focal fixture {focal} is not part of the mini format")
    size = mini.enumeration_size()
    if size > MAX_ENUMERATION:
        raise EnumerationTooLarge(f"{size} outcome combinations exceed {MAX_ENUMERATION}")

    team = focal.home if side == HOME else focal.away
    others = [f for f in mini.fixtures if f != focal]
    cap = mini.goal_cap
    outcomes = []
    for f in others:
        ph = truncated_pmf(lambda_home(params, f.home.pot, f.away.pot), cap)
        pa = truncated_pmf(lambda_away(params, f.home.pot, f.away.pot), cap)
        outcomes.append([(x, y, ph[x] * pa[y]) for x in range(cap + 1) for y in range(cap + 1)])

    focal_scores = {"win": (1, 0), "draw": (0, 0), "loss": (0, 1)}
    if side != HOME:
        focal_scores = {"win": (0, 1), "draw": (0, 0), "loss": (1, 0)}
    terms = {k: [] for k in focal_scores}
    for combo in itertools.product(*outcomes):
        weight = math.prod(o[2] for o in combo)
        played = [ScoredMatch(f, Scoreline(o[0], o[1])) for f, o in zip(others, combo)]
        for label, (x, y) in focal_scores.items():
            matches = played + [ScoredMatch(focal, Scoreline(x, y))]
            rows = accumulate(matches, mini.teams, points)
            if mini.tie_rule == LEAGUE:
                tiers = league_tiers(rows)
            else:
                tiers = group_tiers(rows, matches, points)
            terms[label].append(weight * _prize_share(tiers, team, cutoff))
    return ProbTriple(
        math.fsum(terms["win"]), math.fsum(terms["draw"]), math.fsum(terms["loss"])
    )


@dataclass(frozen=True)
class OracleCase:
    name: str
    mini: MiniFormat
    cutoff: int
    side: str = HOME

    @property
    def focal(self) -> Fixture:
        return self.mini.fixtures[0]


# The focal fixture is always listed first.
ORACLE_SUITE = (
    OracleCase(
        "three-team round robin",
        MiniFormat.from_pots((1, 2, 3), [(0, 1), (1, 2), (2, 0)], goal_cap=3),
        cutoff=1,
    ),
    # A, B, C can finish level on points with a partially separating
    # head-to-head table, e.g. A 1-0 B, C 1-0 A, B 2-1 C, D beating A and B:
    # A drops out and the table is recomputed for {B, C}.
    OracleCase(
        "recursive head-to-head",
        MiniFormat.from_pots((1, 2, 3, 4), [(0, 1), (1, 2), (2, 0), (0, 3), (3, 1)], goal_cap=2),
        cutoff=2,
        side="away",
    ),
    OracleCase(
        "all tied",
        MiniFormat.from_pots(
            (1, 2, 3, 4), [(0, 1), (2, 3), (0, 2), (3, 1), (0, 3), (1, 2)], goal_cap=0
        ),
        cutoff=2,
    ),
    OracleCase(
        "league chain",
        MiniFormat.from_pots(
            (1, 2, 3, 4), [(3, 0), (0, 1), (2, 3), (1, 2), (0, 2)], goal_cap=2, tie_rule=LEAGUE
        ),
        cutoff=2,
    ),
)

"""Reference (pure Python) tables and rankings.

This is the readable implementation of both tie-breaking chains. The
simulation kernels re-implement the same rules on arrays; tests check the
two against each other.

Group chain: points, then recursive head-to-head (points, goal difference,
goals scored among the tied teams, reapplied to any subset that stays tied
after a partial separation), then overall goal difference and goals scored,
then a random draw.

League chain: points, goal difference, goals scored, away goals scored,
wins, away wins, then a random draw.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, Sequence

import numpy as np

from .fixtures import Fixture, TeamId
from .goal_model import Scoreline

DEFAULT_POINTS = (3, 1, 0)


class StandingsError(ValueError):
    """Inconsistent table or match list."""


@dataclass(frozen=True)
class ScoredMatch:
    fixture: Fixture
    score: Scoreline

    @classmethod
    def of(cls, home: TeamId, away: TeamId, home_goals: int, away_goals: int) -> ScoredMatch:
        return cls(Fixture(home, away), Scoreline(home_goals, away_goals))


@dataclass
class TableRow:
    team: TeamId
    points: int = 0
    goals_for: int = 0
    goals_against: int = 0
    away_goals_for: int = 0
    wins: int = 0
    away_wins: int = 0
    draws: int = 0
    played: int = 0

    @property
    def goal_difference(self) -> int:
        return self.goals_for - self.goals_against

    def league_key(self) -> tuple[int, ...]:
        return (
            self.points,
            self.goal_difference,
            self.goals_for,
            self.away_goals_for,
            self.wins,
            self.away_wins,
        )


def accumulate(
    matches: Iterable[ScoredMatch],
    teams: Sequence[TeamId] | None = None,
    points: tuple[int, int, int] = DEFAULT_POINTS,
) -> list[TableRow]:
    """Build one row per team. Without ``teams`` the rows follow first appearance."""
    matches = list(matches)
    if teams is None:
        seen: dict[TeamId, None] = {}
        for m in matches:
            seen.setdefault(m.fixture.home)
            seen.setdefault(m.fixture.away)
        teams = list(seen)
    elif len(set(teams)) != len(teams):
        raise StandingsError("duplicate team in table")
    rows = {t: TableRow(t) for t in teams}
    win, draw, loss = points
    for m in matches:
        h, a = m.fixture.home, m.fixture.away
        if h not in rows or a not in rows:
            raise StandingsError(f"match {m.fixture} references an unknown team")
        hg, ag = m.score.home_goals, m.score.away_goals
        rh, ra = rows[h], rows[a]
        rh.played += 1
        ra.played += 1
        rh.goals_for += hg
        rh.goals_against += ag
        ra.goals_for += ag
        ra.goals_against += hg
        ra.away_goals_for += ag
        if hg > ag:
            rh.points += win
            ra.points += loss
            rh.wins += 1
        elif hg < ag:
            ra.points += win
            rh.points += loss
            ra.wins += 1
            ra.away_wins += 1
        else:
            rh.points += draw
            ra.points += draw
            rh.draws += 1
            ra.draws += 1
    return [rows[t] for t in teams]


def _split(teams: list[TeamId], key) -> list[list[TeamId]]:
    ordered = sorted(teams, key=key, reverse=True)
    return [list(g) for _, g in groupby(ordered, key=key)]


def _head_to_head(
    tied: list[TeamId], matches: Sequence[ScoredMatch], points: tuple[int, int, int]
) -> dict[TeamId, tuple[int, int, int]]:
    members = set(tied)
    mini = [m for m in matches if m.fixture.home in members and m.fixture.away in members]
    rows = {r.team: r for r in accumulate(mini, tied, points)}
    return {t: (rows[t].points, rows[t].goal_difference, rows[t].goals_for) for t in tied}


def group_tiers(
    rows: Sequence[TableRow],
    matches: Sequence[ScoredMatch],
    points: tuple[int, int, int] = DEFAULT_POINTS,
) -> list[list[TeamId]]:
    """Final order as a list of tiers; teams sharing a tier are tied on every criterion."""
    by_team = {r.team: r for r in rows}
    tiers: list[list[TeamId]] = []

    def overall(tied):
        tiers.extend(
            _split(tied, lambda t: (by_team[t].goal_difference, by_team[t].goals_for))
        )

    def head_to_head(tied):
        h2h = _head_to_head(tied, matches, points)
        parts = _split(tied, h2h.__getitem__)
        if len(parts) == 1:
            overall(tied)
            return
        for part in parts:
            if len(part) == 1:
                tiers.append(part)
            else:
                head_to_head(part)

    for part in _split(list(by_team), lambda t: by_team[t].points):
        if len(part) == 1:
            tiers.append(part)
        else:
            head_to_head(part)
    return tiers


def league_tiers(rows: Sequence[TableRow]) -> list[list[TeamId]]:
    by_team = {r.team: r for r in rows}
    return _split(list(by_team), lambda t: by_team[t].league_key())


def _draw_keys(rng, n: int) -> np.ndarray:
    if isinstance(rng, np.random.Generator):
        return rng.random(n)
    return rng.random_keys(n)


def resolve_tiers(tiers: list[list[TeamId]], rng) -> list[TeamId]:
    """Break residual ties by an unbiased random draw."""
    order: list[TeamId] = []
    for tier in tiers:
        if len(tier) == 1:
            order.extend(tier)
            continue
        keys = _draw_keys(rng, len(tier))
        order.extend(tier[i] for i in np.argsort(-keys.astype(np.float64), kind="stable"))
    return order


def _check_double_round_robin(rows, matches):
    teams = {r.team for r in rows}
    if len(rows) != 4 or len(teams) != 4:
        raise StandingsError(f"a group needs exactly 4 teams, got {len(rows)}")
    pairs = defaultdict(int)
    for m in matches:
        pairs[(m.fixture.home, m.fixture.away)] += 1
    for h in teams:
        for a in teams:
            if h != a and pairs[(h, a)] != 1:
                raise StandingsError(f"missing or repeated match {h} v {a}")


def rank_group(
    rows: Sequence[TableRow],
    matches: Sequence[ScoredMatch],
    rng,
    points: tuple[int, int, int] = DEFAULT_POINTS,
) -> list[TeamId]:
    _check_double_round_robin(rows, matches)
    return resolve_tiers(group_tiers(rows, matches, points), rng)


def rank_league(rows: Sequence[TableRow], rng) -> list[TeamId]:
    if len(rows) != 36 or len({r.team for r in rows}) != 36:
        raise StandingsError(f"the league table needs exactly 36 teams, got {len(rows)}")
    return resolve_tiers(league_tiers(rows), rng)

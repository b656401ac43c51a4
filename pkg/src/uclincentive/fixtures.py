"""Match sets for the two tournament designs.

The group stage is one double round-robin group with a team from each pot.
The league phase uses a fixed cyclic incomplete round-robin over 36 teams
(9 per pot): inside pot P team i hosts team i+1 (mod 9); for pots P < Q,
P_i hosts Q_i and Q_i hosts P_{i+1}. Every team then meets two distinct
opponents from each pot, one at home and one away. Rotating all indices
simultaneously maps the design onto itself, so teams in a pot are
exchangeable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .goal_model import POTS, check_pot

LEAGUE_POT_SIZE = 9
GROUP = "group"
LEAGUE = "league"
TIE_RULES = (GROUP, LEAGUE)


class NoSuchMatchType(ValueError):
    """The format has no fixture of the requested pot pairing."""


@dataclass(frozen=True, order=True)
class TeamId:
    pot: int
    index: int = 0

    def __post_init__(self):
        check_pot(self.pot)
        if self.index < 0:
            raise ValueError("team index must be non-negative")

    def __str__(self):
        return f"P{self.pot}.{self.index}"


@dataclass(frozen=True, order=True)
class Fixture:
    home: TeamId
    away: TeamId

    def __post_init__(self):
        if self.home == self.away:
            raise ValueError(f"team {self.home} cannot play itself")


@dataclass(frozen=True)
class MatchType:
    home_pot: int
    away_pot: int

    def __post_init__(self):
        check_pot(self.home_pot)
        check_pot(self.away_pot)

    @classmethod
    def parse(cls, text: str) -> MatchType:
        try:
            h, a = text.strip().split("-")
            return cls(int(h), int(a))
        except ValueError as exc:
            raise ValueError(f"match type must look like '1-4', got {text!r}") from exc

    def __str__(self):
        return f"{self.home_pot}-{self.away_pot}"


# Order used for the figure: 1-2, 2-1, 1-3, 3-1, ...
CROSS_POT_TYPES = tuple(
    mt
    for a in POTS
    for b in POTS
    if a < b
    for mt in (MatchType(a, b), MatchType(b, a))
)
ALL_TYPES = tuple(MatchType(h, a) for h in POTS for a in POTS)


def group_fixtures() -> list[Fixture]:
    teams = [TeamId(p, 0) for p in POTS]
    return [Fixture(h, a) for h in teams for a in teams if h != a]


def league_fixtures() -> list[Fixture]:
    n = LEAGUE_POT_SIZE
    out = []
    for p in POTS:
        for i in range(n):
            out.append(Fixture(TeamId(p, i), TeamId(p, (i + 1) % n)))
    for p in POTS:
        for q in POTS:
            if p >= q:
                continue
            for i in range(n):
                out.append(Fixture(TeamId(p, i), TeamId(q, i)))
                out.append(Fixture(TeamId(q, i), TeamId(p, (i + 1) % n)))
    out.sort()
    return out


@dataclass(frozen=True)
class Format:
    """A concrete tournament: participants, match set and tie-breaking chain."""

    name: str
    teams: tuple[TeamId, ...]
    fixtures: tuple[Fixture, ...]
    tie_rule: str

    def __post_init__(self):
        if self.tie_rule not in TIE_RULES:
            raise ValueError(f"tie rule must be one of {TIE_RULES}")
        if len(set(self.teams)) != len(self.teams):
            raise ValueError("duplicate teams")
        known = set(self.teams)
        for f in self.fixtures:
            if f.home not in known or f.away not in known:
                raise ValueError(f"fixture {f} references an unknown team")

    @cached_property
    def team_index(self) -> dict[TeamId, int]:
        return {t: i for i, t in enumerate(self.teams)}

    @cached_property
    def pots(self) -> np.ndarray:
        return np.array([t.pot for t in self.teams], dtype=np.int64)

    @cached_property
    def home_idx(self) -> np.ndarray:
        return np.array([self.team_index[f.home] for f in self.fixtures], dtype=np.int64)

    @cached_property
    def away_idx(self) -> np.ndarray:
        return np.array([self.team_index[f.away] for f in self.fixtures], dtype=np.int64)

    @property
    def n_teams(self) -> int:
        return len(self.teams)

    def fixture_index(self, fixture: Fixture) -> int:
        return self.fixtures.index(fixture)


def group_format() -> Format:
    return Format(GROUP, tuple(TeamId(p, 0) for p in POTS), tuple(group_fixtures()), GROUP)


def league_format() -> Format:
    teams = tuple(TeamId(p, i) for p in POTS for i in range(LEAGUE_POT_SIZE))
    return Format(LEAGUE, teams, tuple(league_fixtures()), LEAGUE)


def get_format(fmt: str | Format) -> Format:
    if isinstance(fmt, Format):
        return fmt
    if fmt == GROUP:
        return group_format()
    if fmt == LEAGUE:
        return league_format()
    raise ValueError(f"unknown format {fmt!r}; expected 'group' or 'league'")


def focal_fixture(fmt: str | Format, match_type: MatchType) -> Fixture:
    """Smallest fixture (by home then away team) with the given pot pairing."""
    candidates = [
        f
        for f in get_format(fmt).fixtures
        if f.home.pot == match_type.home_pot and f.away.pot == match_type.away_pot
    ]
    if not candidates:
        name = fmt if isinstance(fmt, str) else fmt.name
        raise NoSuchMatchType(f"format {name!r} has no {match_type} fixture")
    return min(candidates)

"""Independent recomputation of kernel output from the counter layout."""

import numpy as np

from uclincentive.engine import goal_tables
from uclincentive.fixtures import LEAGUE, get_format
from uclincentive.goal_model import Scoreline, invert_cdf
from uclincentive.rng import Stream, bits_to_unit, mix64
from uclincentive.standings import ScoredMatch, accumulate, group_tiers, league_tiers

FOCAL_SCORES = ((1, 0), (0, 0), (0, 1))


def _bits(stream, counter):
    return mix64(stream.key + (counter + 1) * 0x9E3779B97F4A7C15)


def reference_ranks(fmt, focal, master_seed, rep, crn=True, goal_cap=None, points=(3, 1, 0)):
    """ranks[c][s] recomputed with the pure-Python standings module."""
    fmt = get_format(fmt)
    tables = goal_tables(fmt, goal_cap=goal_cap)
    stream = Stream(master_seed, rep)
    n_fix, n = len(fmt.fixtures), fmt.n_teams
    out = np.zeros((3, 2), dtype=int)
    for c, (x, y) in enumerate(FOCAL_SCORES):
        if c == 0 or not crn:
            off = 0 if crn else c * (2 * n_fix + n)
            played = []
            for f, fx in enumerate(fmt.fixtures):
                if fx == focal:
                    continue
                hg = invert_cdf(tables[f, 0], bits_to_unit(_bits(stream, off + 2 * f)))
                ag = invert_cdf(tables[f, 1], bits_to_unit(_bits(stream, off + 2 * f + 1)))
                played.append(ScoredMatch(fx, Scoreline(hg, ag)))
            keys = {t: _bits(stream, off + 2 * n_fix + i) for i, t in enumerate(fmt.teams)}
        matches = played + [ScoredMatch(focal, Scoreline(x, y))]
        rows = accumulate(matches, fmt.teams, points)
        tiers = league_tiers(rows) if fmt.tie_rule == LEAGUE else group_tiers(rows, matches, points)
        order = [t for tier in tiers for t in sorted(tier, key=keys.__getitem__, reverse=True)]
        out[c, 0] = order.index(focal.home) + 1
        out[c, 1] = order.index(focal.away) + 1
    return out

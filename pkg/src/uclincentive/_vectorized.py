"""Pure numpy implementation of ``_kernels.simulate_block``.

Works on a whole block of replications at once and yields bit-identical
ranks. The group chain is evaluated without recursion: at every level each
team's head-to-head triple is computed over its current block (teams sharing
the whole key prefix so far), and blocks are refined by those triples. A
block that no longer splits keeps producing the same triple, so after
``n`` levels the lexicographic key

    (points, triple_1, ..., triple_n, goal difference, goals for, random key)

orders the table exactly as the recursive rule does.
"""

from __future__ import annotations

import numpy as np

from ._kernels import FOCAL_SCORES, LEAGUE_RULE
from .rng import bits_to_unit_array, draw_bits_array, replication_keys


def _sample_goals(bits: np.ndarray, tables: np.ndarray) -> np.ndarray:
    """Inversion sampling for every column; ``tables`` is (F, K)."""
    u = bits_to_unit_array(bits)
    goals = np.empty(u.shape, dtype=np.int64)
    # fixtures sharing a table are sampled together
    uniq, inverse = np.unique(tables, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    for k in range(uniq.shape[0]):
        cols = np.flatnonzero(inverse == k)
        goals[:, cols] = np.searchsorted(uniq[k], u[:, cols], side="left")
    return goals


def _fixture_points(hg, ag, win, draw, loss):
    hp = np.where(hg > ag, win, np.where(hg == ag, draw, loss))
    ap = np.where(hg < ag, win, np.where(hg == ag, draw, loss))
    return hp, ap


def _count_better(keys: list[np.ndarray], t: int) -> np.ndarray:
    """Rank of team ``t`` under descending lexicographic ``keys`` (each (R, n))."""
    better = np.zeros(keys[0].shape, dtype=bool)
    for k in reversed(keys):
        kt = k[:, t : t + 1]
        better = (k > kt) | ((k == kt) & better)
    better[:, t] = False
    return 1 + better.sum(axis=1)


def _group_keys(hg, ag, H, A, pts, gd, gf, tkeys, win, draw, loss, home, away):
    n = pts.shape[1]
    hp_f, ap_f = _fixture_points(hg, ag, win, draw, loss)
    keys = [pts]
    block = pts.copy()
    for _ in range(n):
        same = block[:, home] == block[:, away]
        p = (hp_f * same) @ H + (ap_f * same) @ A
        d = ((hg - ag) * same) @ H + ((ag - hg) * same) @ A
        s = (hg * same) @ H + (ag * same) @ A
        keys.extend((p, d, s))
        eq = (
            (block[:, :, None] == block[:, None, :])
            & (p[:, :, None] == p[:, None, :])
            & (d[:, :, None] == d[:, None, :])
            & (s[:, :, None] == s[:, None, :])
        )
        block = eq.argmax(axis=2)
    keys.extend((gd, gf, tkeys))
    return keys


def simulate_block(
    home, away, cdf, focal, n, rule, win, draw, loss,
    master_seed, rep_start, crn, out,
):
    n_reps = out.shape[0]
    n_fix = home.shape[0]
    stride = 2 * n_fix + n
    H = np.zeros((n_fix, n), dtype=np.int64)
    A = np.zeros((n_fix, n), dtype=np.int64)
    H[np.arange(n_fix), home] = 1
    A[np.arange(n_fix), away] = 1
    fh, fa = home[focal], away[focal]
    rk = replication_keys(master_seed, np.arange(rep_start, rep_start + n_reps))

    for c, (x, y) in enumerate(FOCAL_SCORES):
        if c == 0 or not crn:
            offset = 0 if crn else c * stride
            gbits = draw_bits_array(rk, offset + np.arange(2 * n_fix))
            hg = _sample_goals(gbits[:, 0::2], cdf[:, 0, :])
            ag = _sample_goals(gbits[:, 1::2], cdf[:, 1, :])
            hg[:, focal] = 0
            ag[:, focal] = 0
            tkeys = draw_bits_array(rk, offset + 2 * n_fix + np.arange(n))
        hg[:, focal] = x
        ag[:, focal] = y
        hp_f, ap_f = _fixture_points(hg, ag, win, draw, loss)
        pts = hp_f @ H + ap_f @ A
        gd = (hg - ag) @ H + (ag - hg) @ A
        gf = hg @ H + ag @ A
        if rule == LEAGUE_RULE:
            agf = ag @ A
            wins = (hg > ag).astype(np.int64) @ H + (ag > hg).astype(np.int64) @ A
            awins = (ag > hg).astype(np.int64) @ A
            keys = [pts, gd, gf, agf, wins, awins, tkeys]
        else:
            keys = _group_keys(hg, ag, H, A, pts, gd, gf, tkeys, win, draw, loss, home, away)
        out[:, c, 0] = _count_better(keys, fh)
        out[:, c, 1] = _count_better(keys, fa)

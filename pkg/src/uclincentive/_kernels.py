"""Compiled simulation kernels.

One call simulates a contiguous block of replications and writes, for every
replication, the final rank of the focal fixture's home and away team under
the three conditionings 1-0, 0-0 and 0-1 (home goals first).

Random counter layout of a replication (one block per conditioning when
common random numbers are off, a single shared block otherwise)::

    2*f, 2*f+1         home / away goals of fixture f (focal slot unused)
    2*F + t            tie-break key of team t

Without numba these functions still run as plain Python; the engine then
uses the vectorised numpy path instead because it is much faster.
"""

import numpy as np

from ._accel import njit
from .rng import bits_to_unit_u, draw_bits_u, replication_key_u

GROUP_RULE = 0
LEAGUE_RULE = 1

FOCAL_SCORES = ((1, 0), (0, 0), (0, 1))

# stats columns
PTS, GD, GF, AGF, W, AW = 0, 1, 2, 3, 4, 5
N_STATS = 6


@njit(cache=True, nogil=True)
def _invert(table, u):
    m = 0
    while u > table[m]:
        m += 1
    return m


@njit(cache=True, nogil=True)
def _add_result(stats, h, a, hg, ag, win, draw, loss):
    stats[h, GD] += hg - ag
    stats[a, GD] += ag - hg
    stats[h, GF] += hg
    stats[a, GF] += ag
    stats[a, AGF] += ag
    if hg > ag:
        stats[h, PTS] += win
        stats[a, PTS] += loss
        stats[h, W] += 1
    elif hg < ag:
        stats[a, PTS] += win
        stats[h, PTS] += loss
        stats[a, W] += 1
        stats[a, AW] += 1
    else:
        stats[h, PTS] += draw
        stats[a, PTS] += draw


@njit(cache=True, nogil=True)
def _league_rank(t, stats, keys, n):
    rank = 1
    for u in range(n):
        if u == t:
            continue
        better = False
        decided = False
        for c in range(N_STATS):
            if stats[u, c] != stats[t, c]:
                better = stats[u, c] > stats[t, c]
                decided = True
                break
        if not decided:
            better = keys[u] > keys[t]
        if better:
            rank += 1
    return rank


@njit(cache=True, nogil=True)
def _sort_desc(order, s, e, k1, k2, k3):
    # insertion sort of order[s:e] by (k1, k2, k3) descending; segments are tiny
    for i in range(s + 1, e):
        x = order[i]
        j = i - 1
        while j >= s:
            y = order[j]
            if k1[y] > k1[x]:
                break
            if k1[y] == k1[x]:
                if k2[y] > k2[x]:
                    break
                if k2[y] == k2[x] and k3[y] >= k3[x]:
                    break
            order[j + 1] = y
            j -= 1
        order[j + 1] = x


@njit(cache=True, nogil=True)
def _same3(a1, a2, a3, x, y):
    return a1[x] == a1[y] and a2[x] == a2[y] and a3[x] == a3[y]


@njit(cache=True, nogil=True)
def group_order(
    n, pts, gd, gf, keys, home, away, hg, ag, win, draw, loss,
    order, member, hp, hgd, hgf, zeros, stack,
):
    """Full ranking under the group chain; ``order`` receives team indices."""
    for t in range(n):
        order[t] = t
    _sort_desc(order, 0, n, pts, zeros, zeros)
    top = 0
    s = 0
    while s < n:
        e = s + 1
        while e < n and pts[order[e]] == pts[order[s]]:
            e += 1
        if e - s > 1:
            stack[top, 0] = s
            stack[top, 1] = e
            stack[top, 2] = 0
            top += 1
        s = e
    n_fix = home.shape[0]
    while top > 0:
        top -= 1
        s = stack[top, 0]
        e = stack[top, 1]
        mode = stack[top, 2]
        if mode == 1:
            _sort_desc(order, s, e, gd, gf, keys)
            continue
        for t in range(n):
            member[t] = False
        for i in range(s, e):
            t = order[i]
            member[t] = True
            hp[t] = 0
            hgd[t] = 0
            hgf[t] = 0
        for f in range(n_fix):
            h = home[f]
            a = away[f]
            if member[h] and member[a]:
                x = hg[f]
                y = ag[f]
                hgd[h] += x - y
                hgd[a] += y - x
                hgf[h] += x
                hgf[a] += y
                if x > y:
                    hp[h] += win
                    hp[a] += loss
                elif x < y:
                    hp[a] += win
                    hp[h] += loss
                else:
                    hp[h] += draw
                    hp[a] += draw
        _sort_desc(order, s, e, hp, hgd, hgf)
        if _same3(hp, hgd, hgf, order[s], order[e - 1]):
            stack[top, 0] = s
            stack[top, 1] = e
            stack[top, 2] = 1
            top += 1
            continue
        i = s
        while i < e:
            j = i + 1
            while j < e and _same3(hp, hgd, hgf, order[i], order[j]):
                j += 1
            if j - i > 1:
                stack[top, 0] = i
                stack[top, 1] = j
                stack[top, 2] = 0
                top += 1
            i = j


@njit(cache=True, nogil=True)
def simulate_block(
    home, away, cdf, focal, n, rule, win, draw, loss,
    seed_k, rep_start, crn, out,
):
    """Fill ``out[r, c, s]`` with ranks for replications ``rep_start + r``.

    ``cdf`` has shape (F, 2, K): inversion tables for home and away goals.
    """
    n_reps = out.shape[0]
    n_fix = home.shape[0]
    stride = 2 * n_fix + n
    hg = np.zeros(n_fix, np.int64)
    ag = np.zeros(n_fix, np.int64)
    keys = np.zeros(n, np.uint64)
    base = np.zeros((n, N_STATS), np.int64)
    work = np.zeros((n, N_STATS), np.int64)
    order = np.zeros(n, np.int64)
    member = np.zeros(n, np.bool_)
    hp = np.zeros(n, np.int64)
    hgd = np.zeros(n, np.int64)
    hgf = np.zeros(n, np.int64)
    zeros = np.zeros(n, np.int64)
    stack = np.zeros((n + 1, 3), np.int64)
    gpts = np.zeros(n, np.int64)
    ggd = np.zeros(n, np.int64)
    ggf = np.zeros(n, np.int64)
    fh = home[focal]
    fa = away[focal]
    for r in range(n_reps):
        rk = replication_key_u(seed_k, rep_start + r)
        for c in range(3):
            if c == 0 or not crn:
                offset = c * stride if not crn else 0
                for f in range(n_fix):
                    if f == focal:
                        continue
                    u = bits_to_unit_u(draw_bits_u(rk, offset + 2 * f))
                    hg[f] = _invert(cdf[f, 0], u)
                    u = bits_to_unit_u(draw_bits_u(rk, offset + 2 * f + 1))
                    ag[f] = _invert(cdf[f, 1], u)
                for t in range(n):
                    keys[t] = draw_bits_u(rk, offset + 2 * n_fix + t)
                base[:, :] = 0
                for f in range(n_fix):
                    if f != focal:
                        _add_result(base, home[f], away[f], hg[f], ag[f], win, draw, loss)
            if c == 0:
                x, y = 1, 0
            elif c == 1:
                x, y = 0, 0
            else:
                x, y = 0, 1
            work[:, :] = base
            _add_result(work, fh, fa, x, y, win, draw, loss)
            if rule == LEAGUE_RULE:
                out[r, c, 0] = _league_rank(fh, work, keys, n)
                out[r, c, 1] = _league_rank(fa, work, keys, n)
            else:
                hg[focal] = x
                ag[focal] = y
                for t in range(n):
                    gpts[t] = work[t, PTS]
                    ggd[t] = work[t, GD]
                    ggf[t] = work[t, GF]
                group_order(
                    n, gpts, ggd, ggf, keys, home, away, hg, ag, win, draw, loss,
                    order, member, hp, hgd, hgf, zeros, stack,
                )
                for i in range(n):
                    if order[i] == fh:
                        out[r, c, 0] = i + 1
                    elif order[i] == fa:
                        out[r, c, 1] = i + 1

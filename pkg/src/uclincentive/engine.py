"""Conditional prize probabilities and the attacking-incentive ratio.

For a focal fixture every replication samples all other matches once and
ranks the table three times, with the focal match fixed at 1-0, 0-0 and 0-1
(common random numbers). From the focal team's viewpoint this gives the
probabilities ``p_win``, ``p_draw``, ``p_loss`` of finishing within the
cutoff, and the incentive

    I = (p_win - p_draw) / (p_draw - p_loss).

Replication ``r`` draws only from the substream ``(master_seed, r)``, and the
reduction sums integer counters, so results do not depend on how the
replications are split across threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, _vectorized
from ._accel import resolve_backend
from .fixtures import (
    CROSS_POT_TYPES,
    GROUP,
    LEAGUE,
    Fixture,
    Format,
    MatchType,
    NoSuchMatchType,
    focal_fixture,
    get_format,
)
from .goal_model import FITTED, GoalModelParams, cdf_table, lambda_away, lambda_home
from .rng import seed_key
from .standings import DEFAULT_POINTS

HOME = "home"
AWAY = "away"
SIDES = (HOME, AWAY)
DEFAULT_REPLICATIONS = 1_000_000
FAST_REPLICATIONS = 100_000
DEGENERACY_FACTOR = 10.0
FIGURE2_CUTOFFS = {GROUP: (2, 3), LEAGUE: (8, 24)}
THREADS_ENV = "UCLINCENTIVE_THREADS"
FIELD_SIZE = {GROUP: 4, LEAGUE: 36}

_CHUNK = {"numba": 1 << 15, "numpy": 1 << 12}
_MASK64 = (1 << 64) - 1


class DegenerateDenominatorError(ArithmeticError):
    """``p_draw - p_loss`` is too small relative to its noise to form a ratio."""

    def __init__(self, result: IncentiveResult):
        self.result = result
        p = result.probs
        super().__init__(
            f"degenerate denominator: p_draw - p_loss = {p.p_draw - p.p_loss:.3g} "
            f"(paired stderr {result.denominator_stderr:.3g})"
        )


@dataclass(frozen=True)
class ThresholdSpec:
    format: str
    rank_cutoff: int

    def __post_init__(self):
        if self.format not in FIELD_SIZE:
            raise ValueError(f"unknown format {self.format!r}")
        size = FIELD_SIZE[self.format]
        if not 1 <= self.rank_cutoff <= size:
            raise ValueError(f"cutoff must lie in 1..{size} for the {self.format} format")


@dataclass(frozen=True)
class Scenario:
    match_type: MatchType
    perspective: str
    threshold: ThresholdSpec
    replications: int = DEFAULT_REPLICATIONS
    master_seed: int = 0

    def __post_init__(self):
        if self.perspective not in SIDES:
            raise ValueError(f"perspective must be 'home' or 'away', got {self.perspective!r}")
        if self.replications < 1:
            raise ValueError("replications must be positive")
        if self.threshold.format == GROUP and self.match_type.home_pot == self.match_type.away_pot:
            raise NoSuchMatchType(f"the group format has no {self.match_type} fixture")

    @property
    def format(self) -> str:
        return self.threshold.format


@dataclass(frozen=True)
class ProbTriple:
    p_win: float
    p_draw: float
    p_loss: float
    stderr_win: float = 0.0
    stderr_draw: float = 0.0
    stderr_loss: float = 0.0


@dataclass(frozen=True)
class IncentiveResult:
    probs: ProbTriple
    incentive: float | None
    incentive_stderr: float | None
    denominator_stderr: float = 0.0
    numerator_stderr: float = 0.0
    scenario: Scenario | None = None

    @property
    def degenerate(self) -> bool:
        return self.incentive is None


@dataclass
class PairedCounts:
    """Integer sufficient statistics of the three paired prize indicators."""

    n: int = 0
    win: int = 0
    draw: int = 0
    loss: int = 0
    gain_sq: int = 0  # sum of (I_win - I_draw)^2
    drop_sq: int = 0  # sum of (I_draw - I_loss)^2
    cross: int = 0  # sum of (I_win - I_draw) * (I_draw - I_loss)

    def __iadd__(self, other: PairedCounts) -> PairedCounts:
        self.n += other.n
        self.win += other.win
        self.draw += other.draw
        self.loss += other.loss
        self.gain_sq += other.gain_sq
        self.drop_sq += other.drop_sq
        self.cross += other.cross
        return self

    @classmethod
    def from_indicators(cls, iw, id_, il) -> PairedCounts:
        a = iw.astype(np.int64) - id_
        b = id_.astype(np.int64) - il
        return cls(
            n=int(iw.shape[0]),
            win=int(iw.sum()),
            draw=int(id_.sum()),
            loss=int(il.sum()),
            gain_sq=int((a * a).sum()),
            drop_sq=int((b * b).sum()),
            cross=int((a * b).sum()),
        )

    def result(self, scenario: Scenario | None = None, factor: float = DEGENERACY_FACTOR) -> IncentiveResult:
        n = self.n
        pw, pd, pl = self.win / n, self.draw / n, self.loss / n
        probs = ProbTriple(
            pw, pd, pl,
            math.sqrt(pw * (1 - pw) / n),
            math.sqrt(pd * (1 - pd) / n),
            math.sqrt(pl * (1 - pl) / n),
        )
        gain = pw - pd
        drop = pd - pl
        var_gain = max(self.gain_sq / n - gain * gain, 0.0)
        var_drop = max(self.drop_sq / n - drop * drop, 0.0)
        cov = self.cross / n - gain * drop
        se_drop = math.sqrt(var_drop / n)
        se_gain = math.sqrt(var_gain / n)
        if self.draw == self.loss or abs(drop) < factor * se_drop:
            return IncentiveResult(probs, None, None, se_drop, se_gain, scenario)
        ratio = gain / drop
        var_ratio = (var_gain - 2 * ratio * cov + ratio * ratio * var_drop) / (drop * drop * n)
        return IncentiveResult(probs, ratio, math.sqrt(max(var_ratio, 0.0)), se_drop, se_gain, scenario)


@dataclass
class FocalBatch:
    """Counts for both sides of one focal fixture at several cutoffs."""

    cutoffs: tuple[int, ...]
    counts: dict[tuple[str, int], PairedCounts] = field(default_factory=dict)

    def __post_init__(self):
        for side in SIDES:
            for k in self.cutoffs:
                self.counts.setdefault((side, k), PairedCounts())

    def add_ranks(self, ranks: np.ndarray) -> None:
        # ranks[r, c, s]: c indexes the focal score 1-0 / 0-0 / 0-1 (home goals first)
        for s, side in enumerate(SIDES):
            win_c, loss_c = (0, 2) if side == HOME else (2, 0)
            for k in self.cutoffs:
                self.counts[(side, k)] += PairedCounts.from_indicators(
                    ranks[:, win_c, s] <= k, ranks[:, 1, s] <= k, ranks[:, loss_c, s] <= k
                )

    def merge(self, other: FocalBatch) -> None:
        for key, c in other.counts.items():
            self.counts[key] += c

    def result(self, side: str, cutoff: int, scenario: Scenario | None = None) -> IncentiveResult:
        return self.counts[(side, cutoff)].result(scenario)


def goal_tables(
    fmt: Format, params: GoalModelParams = FITTED, goal_cap: int | None = None
) -> np.ndarray:
    """Inversion tables of shape (F, 2, K) for every fixture of ``fmt``."""
    cache: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
    out = []
    for f in fmt.fixtures:
        key = (f.home.pot, f.away.pot)
        if key not in cache:
            cache[key] = (
                cdf_table(lambda_home(params, *key), goal_cap),
                cdf_table(lambda_away(params, *key), goal_cap),
            )
        out.append(np.stack(cache[key]))
    return np.ascontiguousarray(np.stack(out))


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def simulate_ranks(
    fmt: str | Format,
    focal: Fixture,
    replications: int,
    master_seed: int = 0,
    *,
    rep_start: int = 0,
    params: GoalModelParams = FITTED,
    points: tuple[int, int, int] = DEFAULT_POINTS,
    crn: bool = True,
    goal_cap: int | None = None,
    backend: str | None = None,
) -> np.ndarray:
    """Raw ranks, shape (replications, 3, 2); mostly useful for tests."""
    fmt = get_format(fmt)
    backend = resolve_backend(backend)
    out = np.zeros((replications, 3, 2), dtype=np.int16)
    _run_block(fmt, fmt.fixture_index(focal), goal_tables(fmt, params, goal_cap),
               points, crn, master_seed, rep_start, out, backend)
    return out


def _run_block(fmt, focal_idx, tables, points, crn, master_seed, rep_start, out, backend):
    rule = _kernels.LEAGUE_RULE if fmt.tie_rule == LEAGUE else _kernels.GROUP_RULE
    win, draw, loss = points
    master_seed &= _MASK64
    if backend == "numba":
        _kernels.simulate_block(
            fmt.home_idx, fmt.away_idx, tables, focal_idx, fmt.n_teams, rule,
            win, draw, loss, np.uint64(seed_key(master_seed)), rep_start, crn, out,
        )
    else:
        _vectorized.simulate_block(
            fmt.home_idx, fmt.away_idx, tables, focal_idx, fmt.n_teams, rule,
            win, draw, loss, master_seed, rep_start, crn, out,
        )


def simulate_focal(
    fmt: str | Format,
    focal: Fixture,
    cutoffs: tuple[int, ...],
    replications: int,
    master_seed: int = 0,
    *,
    params: GoalModelParams = FITTED,
    points: tuple[int, int, int] = DEFAULT_POINTS,
    crn: bool = True,
    goal_cap: int | None = None,
    threads: int | None = None,
    backend: str | None = None,
    chunk_size: int | None = None,
) -> FocalBatch:
    """Simulate one focal fixture and collect counts for both sides."""
    fmt = get_format(fmt)
    backend = resolve_backend(backend)
    threads = default_threads() if threads is None else threads
    if threads < 1:
        raise ValueError("threads must be at least 1")
    for k in cutoffs:
        if not 1 <= k <= fmt.n_teams:
            raise ValueError(f"cutoff {k} outside 1..{fmt.n_teams}")
    focal_idx = fmt.fixture_index(focal)
    tables = goal_tables(fmt, params, goal_cap)
    chunk = chunk_size or _CHUNK[backend]
    starts = range(0, replications, chunk)

    def work(start):
        out = np.zeros((min(chunk, replications - start), 3, 2), dtype=np.int16)
        _run_block(fmt, focal_idx, tables, points, crn, master_seed, start, out, backend)
        part = FocalBatch(tuple(cutoffs))
        part.add_ranks(out)
        return part

    total = FocalBatch(tuple(cutoffs))
    if threads == 1:
        for s in starts:
            total.merge(work(s))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(work, starts):
                total.merge(part)
    return total


def evaluate_scenario(scenario: Scenario, **options) -> IncentiveResult:
    """Like ``run_scenario`` but returns degenerate results instead of raising."""
    fixture = focal_fixture(scenario.format, scenario.match_type)
    batch = simulate_focal(
        scenario.format, fixture, (scenario.threshold.rank_cutoff,),
        scenario.replications, scenario.master_seed, **options,
    )
    return batch.result(scenario.perspective, scenario.threshold.rank_cutoff, scenario)


def run_scenario(scenario: Scenario, **options) -> IncentiveResult:
    result = evaluate_scenario(scenario, **options)
    if result.degenerate:
        raise DegenerateDenominatorError(result)
    return result


def figure2_scenarios(replications: int, master_seed: int) -> list[Scenario]:
    out = []
    for fmt in (GROUP, LEAGUE):
        for k in FIGURE2_CUTOFFS[fmt]:
            for mt in CROSS_POT_TYPES:
                for side in SIDES:
                    out.append(Scenario(mt, side, ThresholdSpec(fmt, k), replications, master_seed))
    return out


def run_figure2(
    replications: int = DEFAULT_REPLICATIONS,
    master_seed: int = 0,
    *,
    progress=None,
    **options,
) -> list[IncentiveResult]:
    """All 96 cells: 12 cross-pot types x 2 sides x 2 prizes x 2 formats.

    One batch per (format, match type) serves both sides and both cutoffs.
    """
    batches = {}
    for fmt in (GROUP, LEAGUE):
        for mt in CROSS_POT_TYPES:
            batches[(fmt, mt)] = simulate_focal(
                fmt, focal_fixture(fmt, mt), FIGURE2_CUTOFFS[fmt],
                replications, master_seed, **options,
            )
            if progress is not None:
                progress(fmt, mt)
    return [
        batches[(s.format, s.match_type)].result(s.perspective, s.threshold.rank_cutoff, s)
        for s in figure2_scenarios(replications, master_seed)
    ]


def _lookup(table: list[IncentiveResult]) -> dict[tuple[str, int, MatchType, str], IncentiveResult]:
    return {
        (r.scenario.format, r.scenario.threshold.rank_cutoff, r.scenario.match_type, r.scenario.perspective): r
        for r in table
    }


def uplifts(table: list[IncentiveResult]) -> dict[tuple[MatchType, str], tuple[float, float]]:
    """Per (type, side): (I8 / I2 - 1, I24 / I3 - 1) as fractions."""
    cells = _lookup(table)
    out = {}
    for mt in CROSS_POT_TYPES:
        for side in SIDES:
            try:
                g2, g3 = cells[(GROUP, 2, mt, side)], cells[(GROUP, 3, mt, side)]
                l8, l24 = cells[(LEAGUE, 8, mt, side)], cells[(LEAGUE, 24, mt, side)]
            except KeyError as exc:
                raise ValueError(f"incomplete table: missing cell {exc}") from exc
            for cell in (g2, g3, l8, l24):
                if cell.degenerate:
                    raise DegenerateDenominatorError(cell)
            out[(mt, side)] = (l8.incentive / g2.incentive - 1, l24.incentive / g3.incentive - 1)
    return out


def aggregate_uplift(table: list[IncentiveResult]) -> tuple[float, float]:
    """Mean uplift in percent over the 24 (type, side) cells: (first prize, second prize)."""
    cells = list(uplifts(table).values())
    first = 100.0 * sum(c[0] for c in cells) / len(cells)
    second = 100.0 * sum(c[1] for c in cells) / len(cells)
    return first, second

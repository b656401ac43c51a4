"""Command-line front end.

    uclincentive simulate --format league --type 4-1 --side home --cutoff 8
    uclincentive figure2 --replications 100000 --seed 42 -o fig2.csv
    uclincentive uplift --input fig2.csv
    uclincentive oracle-check

Settings resolve as: command-line flag, then ``--config`` file
(``key = value`` lines, ``#`` comments), then built-in defaults. The thread
count falls back to ``UCLINCENTIVE_THREADS`` when neither sets it.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .engine import (
    DEFAULT_REPLICATIONS,
    FIELD_SIZE,
    SIDES,
    IncentiveResult,
    ProbTriple,
    Scenario,
    ThresholdSpec,
    aggregate_uplift,
    default_threads,
    evaluate_scenario,
    run_figure2,
    simulate_focal,
    uplifts,
)
from .fixtures import GROUP, LEAGUE, MatchType, NoSuchMatchType
from .goal_model import GoalModelParams
from .oracle import ORACLE_SUITE, exact_prob_triple

COMMANDS = ("simulate", "figure2", "uplift", "oracle-check")
CSV_HEADER = (
    "format,prize_cutoff,home_pot,away_pot,perspective,p_win,p_draw,p_loss,"
    "stderr_win,stderr_draw,stderr_loss,incentive,incentive_stderr,replications,seed"
)
ORACLE_Z_LIMIT = 4.0

_DEFAULTS = {
    "format": None,
    "type": None,
    "side": None,
    "cutoff": None,
    "replications": DEFAULT_REPLICATIONS,
    "seed": 0,
    "threads": None,
    "crn": True,
    "output": "-",
    "input": None,
    "backend": None,
    "points": "3,1,0",
}
_PARAM_KEYS = ("alpha_home", "beta_home", "alpha_away", "beta_away")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    format: str | None = None
    match_type: MatchType | None = None
    perspective: str | None = None
    cutoff: int | None = None
    replications: int = DEFAULT_REPLICATIONS
    master_seed: int = 0
    threads: int = 1
    crn: bool = True
    output_path: str = "-"
    input_path: str | None = None
    backend: str | None = None
    points: tuple[int, int, int] = (3, 1, 0)
    params: GoalModelParams = field(default_factory=GoalModelParams)
    verbose: bool = False

    def scenario(self) -> Scenario:
        return Scenario(
            self.match_type,
            self.perspective,
            ThresholdSpec(self.format, self.cutoff),
            self.replications,
            self.master_seed,
        )

    def engine_options(self) -> dict:
        return {
            "params": self.params,
            "points": self.points,
            "crn": self.crn,
            "threads": self.threads,
            "backend": self.backend,
        }


def read_config_file(path: str | Path) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _parse_bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _positive_int(name, value) -> int:
    try:
        out = int(value)
    except (TypeError, ValueError):
        raise UsageError(f"{name} must be an integer, got {value!r}") from None
    if out < 1:
        raise UsageError(f"{name} must be at least 1, got {out}")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--replications", "-n", type=int, default=None)
    common.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--crn", dest="crn", action="store_true", default=None,
                        help="common random numbers across the three conditionings (default)")
    common.add_argument("--no-crn", dest="crn", action="store_false")
    common.add_argument("--output", "-o", default=None, help="CSV path, '-' for stdout")
    common.add_argument("--backend", choices=("numba", "numpy"), default=None)
    common.add_argument("--verbose", "-v", action="store_true")

    parser = argparse.ArgumentParser(
        prog="uclincentive",
        description="Monte Carlo incentives for attacking play: group stage vs league phase.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", parents=[common], help="one scenario")
    sim.add_argument("--format", choices=(GROUP, LEAGUE), default=None)
    sim.add_argument("--type", default=None, help="match type as home-away pots, e.g. 4-1")
    sim.add_argument("--side", choices=SIDES, default=None)
    sim.add_argument("--cutoff", type=int, default=None, help="prize: final rank <= cutoff")
    sub.add_parser("figure2", parents=[common], help="all 96 cells of the comparison")
    up = sub.add_parser("uplift", parents=[common], help="average league-over-group uplift")
    up.add_argument("--input", "-i", default=None, help="reuse a figure2 CSV instead of simulating")
    sub.add_parser("oracle-check", parents=[common], help="engine vs exact enumeration")
    return parser


def parse_args(argv=None) -> RunConfig:
    """Parse and validate; raises ``UsageError`` on bad input."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    values = dict(_DEFAULTS)
    file_values = read_config_file(ns.config) if ns.config else {}
    values.update({k: v for k, v in file_values.items() if k in _DEFAULTS})
    for key in _DEFAULTS:
        cli_value = getattr(ns, key, None)
        if cli_value is not None:
            values[key] = cli_value
    unknown = set(file_values) - set(_DEFAULTS) - set(_PARAM_KEYS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")

    try:
        params = GoalModelParams.from_mapping({k: file_values[k] for k in _PARAM_KEYS if k in file_values})
    except ValueError as exc:
        raise UsageError(f"bad goal-model parameter: {exc}") from None
    try:
        points = tuple(int(x) for x in str(values["points"]).split(","))
    except ValueError:
        raise UsageError(f"points must look like '3,1,0', got {values['points']!r}") from None
    if len(points) != 3:
        raise UsageError("points needs three values: win, draw, loss")

    cfg = RunConfig(
        command=ns.command,
        replications=_positive_int("replications", values["replications"]),
        master_seed=int(values["seed"]),
        threads=(
            _positive_int("threads", values["threads"])
            if values["threads"] is not None
            else default_threads()
        ),
        crn=values["crn"] if isinstance(values["crn"], bool) else _parse_bool(values["crn"]),
        output_path=str(values["output"]),
        input_path=values["input"],
        backend=values["backend"],
        points=points,
        params=params,
        verbose=ns.verbose,
    )
    if cfg.backend not in (None, "numba", "numpy"):
        raise UsageError(f"backend must be numba or numpy, got {cfg.backend!r}")

    if cfg.command == "simulate":
        missing = [k for k in ("format", "type", "side", "cutoff") if values[k] is None]
        if missing:
            raise UsageError(f"simulate needs --{', --'.join(missing)}")
        if values["format"] not in FIELD_SIZE:
            raise UsageError(f"format must be group or league, got {values['format']!r}")
        if values["side"] not in SIDES:
            raise UsageError(f"side must be home or away, got {values['side']!r}")
        try:
            cfg.match_type = MatchType.parse(str(values["type"]))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        cfg.format = values["format"]
        cfg.perspective = values["side"]
        cutoff = int(values["cutoff"])
        if not 1 <= cutoff <= FIELD_SIZE[cfg.format]:
            raise UsageError(f"cutoff must lie in 1..{FIELD_SIZE[cfg.format]} for the {cfg.format} format")
        cfg.cutoff = cutoff
        if cfg.format == GROUP and cfg.match_type.home_pot == cfg.match_type.away_pot:
            raise UsageError(f"the group format has no same-pot match type ({cfg.match_type})")
    return cfg


def _sort_key(r: IncentiveResult):
    s = r.scenario
    return (s.format, s.threshold.rank_cutoff, s.match_type.home_pot, s.match_type.away_pot, s.perspective)


def format_csv(results: list[IncentiveResult]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in sorted(results, key=_sort_key):
        s, p = r.scenario, r.probs
        incentive = "NA" if r.degenerate else f"{r.incentive:.6f}"
        incentive_se = "NA" if r.degenerate else f"{r.incentive_stderr:.6f}"
        fields = [
            s.format,
            str(s.threshold.rank_cutoff),
            str(s.match_type.home_pot),
            str(s.match_type.away_pot),
            s.perspective,
            f"{p.p_win:.6f}",
            f"{p.p_draw:.6f}",
            f"{p.p_loss:.6f}",
            f"{p.stderr_win:.6f}",
            f"{p.stderr_draw:.6f}",
            f"{p.stderr_loss:.6f}",
            incentive,
            incentive_se,
            str(s.replications),
            str(s.master_seed),
        ]
        buf.write(",".join(fields) + "\n")
    return buf.getvalue()


def emit_csv(results: list[IncentiveResult], output_path: str | Path = "-") -> None:
    text = format_csv(results)
    if str(output_path) == "-":
        sys.stdout.write(text)
        return
    Path(output_path).write_text(text)


def read_csv(path: str | Path) -> list[IncentiveResult]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            scenario = Scenario(
                MatchType(int(row["home_pot"]), int(row["away_pot"])),
                row["perspective"],
                ThresholdSpec(row["format"], int(row["prize_cutoff"])),
                int(row["replications"]),
                int(row["seed"]),
            )
            probs = ProbTriple(
                *(float(row[k]) for k in ("p_win", "p_draw", "p_loss",
                                          "stderr_win", "stderr_draw", "stderr_loss"))
            )
            if row["incentive"] == "NA":
                out.append(IncentiveResult(probs, None, None, scenario=scenario))
            else:
                out.append(IncentiveResult(probs, float(row["incentive"]),
                                           float(row["incentive_stderr"]), scenario=scenario))
    return out


def _log(cfg: RunConfig, msg: str) -> None:
    if cfg.verbose:
        print(msg, file=sys.stderr)


def _cmd_simulate(cfg: RunConfig) -> int:
    result = evaluate_scenario(cfg.scenario(), **cfg.engine_options())
    emit_csv([result], cfg.output_path)
    if result.degenerate:
        print("error: degenerate denominator (p_draw - p_loss indistinguishable from zero)",
              file=sys.stderr)
        return 1
    return 0


def _figure2(cfg: RunConfig) -> list[IncentiveResult]:
    return run_figure2(
        cfg.replications, cfg.master_seed,
        progress=lambda fmt, mt: _log(cfg, f"done {fmt} {mt}"),
        **cfg.engine_options(),
    )


def _cmd_figure2(cfg: RunConfig) -> int:
    results = _figure2(cfg)
    emit_csv(results, cfg.output_path)
    bad = sum(r.degenerate for r in results)
    if bad:
        print(f"error: {bad} degenerate cells", file=sys.stderr)
        return 1
    return 0


def _cmd_uplift(cfg: RunConfig) -> int:
    results = read_csv(cfg.input_path) if cfg.input_path else _figure2(cfg)
    try:
        cells = uplifts(results)
        first, second = aggregate_uplift(results)
    except (ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    lines = ["match_type,perspective,first_prize_uplift_pct,second_prize_uplift_pct"]
    for (mt, side), (u1, u2) in cells.items():
        lines.append(f"{mt},{side},{100 * u1:.2f},{100 * u2:.2f}")
    lines.append(f"mean,all,{first:.2f},{second:.2f}")
    text = "\n".join(lines) + "\n"
    if cfg.output_path == "-":
        sys.stdout.write(text)
    else:
        Path(cfg.output_path).write_text(text)
    return 0


def _cmd_oracle_check(cfg: RunConfig) -> int:
    failed = 0
    lines = ["case,outcome,exact,estimate,stderr,z"]
    for case in ORACLE_SUITE:
        exact = exact_prob_triple(case.mini, case.focal, case.cutoff, case.side,
                                  cfg.params, cfg.points)
        batch = simulate_focal(
            case.mini.as_format(), case.focal, (case.cutoff,), cfg.replications,
            cfg.master_seed, goal_cap=case.mini.goal_cap, **cfg.engine_options(),
        )
        est = batch.result(case.side, case.cutoff).probs
        for label in ("win", "draw", "loss"):
            e = getattr(exact, f"p_{label}")
            m = getattr(est, f"p_{label}")
            se = getattr(est, f"stderr_{label}")
            z = 0.0 if m == e else (float("inf") if se == 0 else (m - e) / se)
            failed += abs(z) > ORACLE_Z_LIMIT
            lines.append(f"{case.name},{label},{e:.6f},{m:.6f},{se:.6f},{z:.2f}")
    text = "\n".join(lines) + "\n"
    if cfg.output_path == "-":
        sys.stdout.write(text)
    else:
        Path(cfg.output_path).write_text(text)
    return 1 if failed else 0


_HANDLERS = {
    "simulate": _cmd_simulate,
    "figure2": _cmd_figure2,
    "uplift": _cmd_uplift,
    "oracle-check": _cmd_oracle_check,
}


def main(argv=None) -> int:
    try:
        cfg = parse_args(argv)
    except (UsageError, NoSuchMatchType, OSError) as exc:
        print(f"uclincentive: error: {exc}", file=sys.stderr)
        return 2
    try:
        return _HANDLERS[cfg.command](cfg)
    except OSError as exc:
        print(f"uclincentive: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

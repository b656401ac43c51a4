import subprocess
import sys

import pytest

from uclincentive.cli import CSV_HEADER, UsageError, format_csv, main, parse_args, read_csv
from uclincentive.engine import DEFAULT_REPLICATIONS, IncentiveResult, ProbTriple, Scenario, ThresholdSpec
from uclincentive.fixtures import MatchType

SIM = ["simulate", "--format", "league", "--type", "4-1", "--side", "home", "--cutoff", "8"]


def test_simulate_config_defaults():
    cfg = parse_args(SIM)
    s = cfg.scenario()
    assert (s.format, s.match_type, s.perspective, s.threshold.rank_cutoff) == (
        "league", MatchType(4, 1), "home", 8)
    assert (cfg.replications, cfg.master_seed, cfg.crn) == (DEFAULT_REPLICATIONS, 0, True)
    assert DEFAULT_REPLICATIONS == 10**6


def test_figure2_config():
    cfg = parse_args(["figure2", "--replications", "100000", "--seed", "42"])
    assert (cfg.command, cfg.replications, cfg.master_seed) == ("figure2", 100_000, 42)


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--format", "group", "--type", "3-3", "--side", "home", "--cutoff", "2"],
        ["simulate", "--format", "group", "--type", "5-1", "--side", "home", "--cutoff", "2"],
        ["simulate", "--format", "group", "--type", "1-2", "--side", "home", "--cutoff", "5"],
        ["simulate", "--format", "league", "--type", "1-2", "--side", "home", "--cutoff", "0"],
        ["simulate", "--format", "league", "--type", "1-2", "--cutoff", "8"],
        ["figure2", "--threads", "0"],
        ["figure2", "--replications", "-3"],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(UsageError):
        parse_args(argv)
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_config_file_precedence(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("# sensitivity run\nreplications = 5000\nseed = 9  # trailing\ncrn = off\n"
                    "alpha_home = 0.5\npoints = 2,1,0\n")
    cfg = parse_args(["figure2", "--config", str(conf), "--seed", "3"])
    assert (cfg.replications, cfg.master_seed, cfg.crn) == (5000, 3, False)
    assert cfg.params.alpha_home == 0.5 and cfg.params.beta_home == -0.1693
    assert cfg.points == (2, 1, 0)
    assert parse_args(["figure2", "--config", str(conf), "--crn"]).crn is True


def test_unknown_config_key(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("replicashuns = 5\n")
    with pytest.raises(UsageError):
        parse_args(["figure2", "--config", str(conf)])


def test_thread_env_only_when_flag_absent(monkeypatch):
    monkeypatch.setenv("UCLINCENTIVE_THREADS", "6")
    assert parse_args(["figure2"]).threads == 6
    assert parse_args(["figure2", "--threads", "2"]).threads == 2


def _result(incentive, se):
    s = Scenario(MatchType(2, 1), "away", ThresholdSpec("group", 4), 10, 0)
    return IncentiveResult(ProbTriple(1.0, 1.0, 1.0), incentive, se, scenario=s)


def test_degenerate_cell_renders_na(tmp_path):
    text = format_csv([_result(None, None)])
    header, row = text.splitlines()
    assert header == CSV_HEADER
    assert row == "group,4,2,1,away,1.000000,1.000000,1.000000,0.000000,0.000000,0.000000,NA,NA,10,0"
    path = tmp_path / "out.csv"
    path.write_text(text)
    assert read_csv(path)[0].degenerate


def test_simulate_writes_csv_and_is_repeatable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = SIM + ["-n", "20000", "--seed", "4"]
    assert main(argv + ["-o", str(a)]) == 0
    assert main(argv + ["-o", str(b), "--threads", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = a.read_text().splitlines()
    assert rows[0] == CSV_HEADER and len(rows) == 2
    assert rows[1].startswith("league,8,4,1,home,")
    back = read_csv(a)[0]
    assert back.scenario.replications == 20000 and back.incentive > 0


def test_simulate_degenerate_exits_nonzero(capsys):
    argv = ["simulate", "--format", "group", "--type", "2-1", "--side", "away", "--cutoff", "4", "-n", "500"]
    assert main(argv) == 1
    out = capsys.readouterr()
    assert out.out.splitlines()[1].endswith(",NA,NA,500,0")
    assert "degenerate" in out.err


def test_figure2_and_uplift_roundtrip(tmp_path, capsys):
    path = tmp_path / "fig2.csv"
    assert main(["figure2", "-n", "30000", "--seed", "1", "-o", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert len(lines) == 97
    keys = [tuple(line.split(",")[:5]) for line in lines[1:]]
    parsed = [(f, int(k), int(h), int(a), s) for f, k, h, a, s in keys]
    assert parsed == sorted(parsed)
    assert format_csv(read_csv(path)) == path.read_text()
    assert main(["uplift", "--input", str(path)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("match_type,perspective") and out[-1].startswith("mean,all,")
    assert len(out) == 26


def test_oracle_check_command(capsys):
    assert main(["oracle-check", "-n", "50000"]) == 0
    assert capsys.readouterr().out.count("\n") == 1 + 3 * 4


def test_unwritable_output(tmp_path):
    assert main(SIM + ["-n", "100", "-o", str(tmp_path / "missing" / "x.csv")]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "uclincentive", "simulate", "--format", "group",
                           "--type", "3-3", "--side", "home", "--cutoff", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "same-pot" in proc.stderr

"""Compare the numba kernels with the pure-numpy fallback.

    python benchmarks/bench_backends.py [--replications N] [--repeat R]

Both backends produce identical ranks, so the benchmark also asserts that.
"""

import argparse
import time

import numpy as np

from uclincentive.engine import simulate_ranks
from uclincentive.fixtures import MatchType, focal_fixture, get_format


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--replications", "-n", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    print(f"{'format':<8}{'backend':<8}{'us/rep':>10}{'speedup':>10}")
    for name in ("group", "league"):
        fmt = get_format(name)
        focal = focal_fixture(fmt, MatchType(1, 2))
        times, outs = {}, {}
        for backend in ("numba", "numpy"):
            simulate_ranks(fmt, focal, 64, 0, backend=backend)  # compile / warm up
            times[backend], outs[backend] = best_time(
                lambda: simulate_ranks(fmt, focal, args.replications, 0, backend=backend),
                args.repeat,
            )
        assert np.array_equal(outs["numba"], outs["numpy"]), "backends disagree"
        for backend in ("numba", "numpy"):
            us = 1e6 * times[backend] / args.replications
            print(f"{name:<8}{backend:<8}{us:>10.2f}{times['numpy'] / times[backend]:>10.1f}x")


if __name__ == "__main__":
    main()

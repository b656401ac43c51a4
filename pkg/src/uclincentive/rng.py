"""Counter-based random streams.

Every random draw is a pure function of ``(master_seed, replication, counter)``:

    seed_key = mix64(master_seed + GOLDEN)
    rep_key  = mix64(seed_key + (replication + 1) * REP_GAMMA)
    bits     = mix64(rep_key + (counter + 1) * GOLDEN)

``mix64`` is the SplitMix64 finaliser, so for a fixed replication the draws are
exactly the SplitMix64 sequence started at ``rep_key``. Because nothing is
carried between replications, any partition of replication indices across
workers reproduces the same numbers.
"""

from __future__ import annotations

import numpy as np

from ._accel import njit

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
REP_GAMMA = 0xD1B54A32D192ED03
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_TO_UNIT = 2.0**-53

_U_GOLDEN = np.uint64(GOLDEN)
_U_REP_GAMMA = np.uint64(REP_GAMMA)
_U_M1 = np.uint64(_M1)
_U_M2 = np.uint64(_M2)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_U1 = np.uint64(1)


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def seed_key(master_seed: int) -> int:
    return mix64((master_seed & MASK64) + GOLDEN)


def replication_key(master_seed: int, replication: int) -> int:
    return mix64(seed_key(master_seed) + (replication + 1) * REP_GAMMA)


def bits_to_unit(bits: int) -> float:
    return (bits >> 11) * _TO_UNIT


class Stream:
    """Sequential view of one replication's substream.

    Scalar and slow; the simulation kernels compute the same numbers in bulk.
    """

    __slots__ = ("key", "counter")

    def __init__(self, master_seed: int, replication: int = 0, counter: int = 0):
        self.key = replication_key(master_seed, replication)
        self.counter = counter

    def next_bits(self) -> int:
        self.counter += 1
        return mix64(self.key + self.counter * GOLDEN)

    def uniform(self) -> float:
        return bits_to_unit(self.next_bits())

    def uniforms(self, n: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(n)])

    def random_keys(self, n: int) -> np.ndarray:
        return np.array([self.next_bits() for _ in range(n)], dtype=np.uint64)

    def copy(self) -> Stream:
        out = Stream.__new__(Stream)
        out.key = self.key
        out.counter = self.counter
        return out


# numba kernels: every operand stays uint64 so nothing is promoted to float


@njit(cache=True)
def mix64_u(z):
    z = np.uint64(z)
    z = (z ^ (z >> _U30)) * _U_M1
    z = (z ^ (z >> _U27)) * _U_M2
    return z ^ (z >> _U31)


@njit(cache=True)
def replication_key_u(seed_k, rep):
    return mix64_u(np.uint64(seed_k) + (np.uint64(rep) + _U1) * _U_REP_GAMMA)


@njit(cache=True)
def draw_bits_u(rep_k, counter):
    return mix64_u(np.uint64(rep_k) + (np.uint64(counter) + _U1) * _U_GOLDEN)


@njit(cache=True)
def bits_to_unit_u(bits):
    return np.float64(np.uint64(bits) >> _U11) * _TO_UNIT


# vectorised numpy equivalents


def mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U30)) * _U_M1
    z = (z ^ (z >> _U27)) * _U_M2
    return z ^ (z >> _U31)


def replication_keys(master_seed: int, replications: np.ndarray) -> np.ndarray:
    reps = np.asarray(replications, dtype=np.uint64)
    return mix64_array(np.uint64(seed_key(master_seed)) + (reps + _U1) * _U_REP_GAMMA)


def draw_bits_array(rep_keys: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Bits for every (replication, counter) pair, shape ``rep_keys.shape + counters.shape``."""
    c = (np.asarray(counters, dtype=np.uint64) + _U1) * _U_GOLDEN
    return mix64_array(rep_keys[..., None] + c)


def bits_to_unit_array(bits: np.ndarray) -> np.ndarray:
    return (bits >> _U11).astype(np.float64) * _TO_UNIT

"""Seeded instance generators.

All randomness comes from SplitMix64 so that the same seed produces the same
instance in any language:

    state = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    return z ^ (z >> 31)

A uniform double in [0, 1) is ``(next() >> 11) * 2^-53``; ``uniform(lo, hi)``
is ``lo + (hi - lo) * u``. Draws happen in the order documented on each
profile below.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import EdgeSchedError
from .model import Instance, validate

MASK64 = (1 << 64) - 1


class InvalidParams(EdgeSchedError, ValueError):
    pass


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def choice_index(self, weights) -> int:
        """Index drawn with probability proportional to ``weights``."""
        u = self.random() * sum(weights)
        acc = 0.0
        for k, w in enumerate(weights):
            acc += w
            if u < acc:
                return k
        return len(weights) - 1


# Accuracies of MobileNet a=0.25, MobileNet a=0.75 (device) and ResNet50 (server).
TABLE2_ACCURACIES = (0.395, 0.559, 0.771)
TABLE2_SIZES = (128, 512, 1024)
# Per image size: device model 1, device model 2, server compute (seconds).
TABLE2_TIMES = {
    128: (0.01, 0.04, 0.28),
    512: (0.011, 0.04, 0.32),
    1024: (0.011, 0.043, 0.38),
}
# Synthetic surrogate for the measured upload time: uniform in this range,
# multiplied by the size tier (1, 2, 3). Not measured data.
COMM_RANGE = (0.05, 0.15)
COMM_TIER_SCALE = {128: 1.0, 512: 2.0, 1024: 3.0}

PROFILES = ("table2", "monotone_random", "identical_random")


def default_time_ranges(tiers: int):
    """Non-overlapping, doubling ranges: tier i spans [0.01*2^i, 0.01*2^(i+1))."""
    return tuple((0.01 * 2**i, 0.01 * 2 ** (i + 1)) for i in range(tiers))


@dataclass(frozen=True)
class GenParams:
    profile: str
    n: int
    m: int = 2
    T: float = 1.0
    seed: int = 0
    time_ranges: Optional[tuple] = None
    accuracy_range: tuple = (0.3, 0.95)
    size_mix: tuple = (1 / 3, 1 / 3, 1 / 3)
    grid: Optional[float] = None  # identical_random: snap times to multiples of this

    def resolved_ranges(self):
        return tuple(tuple(r) for r in (self.time_ranges or default_time_ranges(self.m + 1)))


def _check(params: GenParams):
    if params.profile not in PROFILES:
        raise InvalidParams(f"unknown profile {params.profile!r}; choose from {PROFILES}")
    if params.n < 1 or params.m < 1:
        raise InvalidParams("need n >= 1 and m >= 1")
    if params.T <= 0:
        raise InvalidParams("T must be positive")
    if params.profile == "table2":
        if len(params.size_mix) != 3 or min(params.size_mix) < 0 or sum(params.size_mix) <= 0:
            raise InvalidParams("size_mix needs three nonnegative proportions")
        return
    ranges = params.resolved_ranges()
    if len(ranges) != params.m + 1:
        raise InvalidParams(f"need {params.m + 1} time ranges, got {len(ranges)}")
    for k, (lo, hi) in enumerate(ranges):
        if not 0 < lo < hi:
            raise InvalidParams(f"time range {k} must satisfy 0 < low < high")
        if k and lo < ranges[k - 1][1]:
            raise InvalidParams("time ranges must be increasing and non-overlapping")
    lo, hi = params.accuracy_range
    if not 0 <= lo <= hi <= 1:
        raise InvalidParams("accuracy_range must lie within [0, 1]")
    if params.grid is not None and params.grid <= 0:
        raise InvalidParams("grid must be positive")


def _accuracies(rng: SplitMix64, params: GenParams):
    lo, hi = params.accuracy_range
    return sorted(rng.uniform(lo, hi) for _ in range(params.m + 1))


def _table2(rng: SplitMix64, params: GenParams) -> Instance:
    # per job: size draw, then comm draw
    times = np.empty((3, params.n))
    comm = np.empty(params.n)
    for j in range(params.n):
        size = TABLE2_SIZES[rng.choice_index(params.size_mix)]
        ed1, ed2, server = TABLE2_TIMES[size]
        comm[j] = rng.uniform(*COMM_RANGE) * COMM_TIER_SCALE[size]
        times[:, j] = (ed1, ed2, server + comm[j])
    return Instance(TABLE2_ACCURACIES, times, params.T, comm)


def _monotone(rng: SplitMix64, params: GenParams) -> Instance:
    # accuracies first, then per job one draw per tier from model 1 to the ES
    acc = _accuracies(rng, params)
    ranges = params.resolved_ranges()
    times = np.empty((params.m + 1, params.n))
    for j in range(params.n):
        for i, (lo, hi) in enumerate(ranges):
            times[i, j] = rng.uniform(lo, hi)
    return Instance(acc, times, params.T)


def _identical(rng: SplitMix64, params: GenParams) -> Instance:
    # accuracies, then one draw per tier shared by every job
    acc = _accuracies(rng, params)
    per_model = []
    for lo, hi in params.resolved_ranges():
        t = rng.uniform(lo, hi)
        if params.grid is not None:
            t = max(1, round(t / params.grid)) * params.grid
        per_model.append(t)
    times = np.repeat(np.array(per_model)[:, None], params.n, axis=1)
    return Instance(acc, times, params.T)


def generate(params: GenParams) -> Instance:
    if params.profile == "table2" and params.m != 2:
        params = replace(params, m=2)
    _check(params)
    rng = SplitMix64(params.seed)
    build = {"table2": _table2, "monotone_random": _monotone, "identical_random": _identical}
    return validate(build[params.profile](rng, params))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgesched.cli import dumps_instance
from edgesched.gen import (
    COMM_RANGE,
    COMM_TIER_SCALE,
    TABLE2_ACCURACIES,
    TABLE2_TIMES,
    GenParams,
    InvalidParams,
    SplitMix64,
    generate,
)
from edgesched.model import validate


def test_splitmix_reference_value():
    # first output of the reference splitmix64 seeded with 0
    assert SplitMix64(0).next_u64() == 0xE220A8397B1DCDAF


def test_splitmix_floats():
    rng = SplitMix64(123)
    xs = [rng.random() for _ in range(1000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    assert SplitMix64(7).uniform(2.0, 3.0) == 2.0 + SplitMix64(7).random()


def test_table2_constants():
    assert TABLE2_ACCURACIES == (0.395, 0.559, 0.771)
    assert TABLE2_TIMES[128] == (0.01, 0.04, 0.28)


def test_table2_profile():
    inst = generate(GenParams("table2", n=200, m=5, T=2.0, seed=9))
    assert inst.m == 2
    assert tuple(inst.accuracies) == TABLE2_ACCURACIES
    rows = {(inst.times[0, j], inst.times[1, j]) for j in range(inst.n)}
    assert rows <= {(v[0], v[1]) for v in TABLE2_TIMES.values()}
    for j in range(inst.n):
        size = next(s for s, v in TABLE2_TIMES.items() if (v[0], v[1]) == (inst.times[0, j], inst.times[1, j]) and abs(inst.times[2, j] - inst.comm_times[j] - v[2]) < 1e-12)
        lo, hi = COMM_RANGE
        scale = COMM_TIER_SCALE[size]
        assert lo * scale <= inst.comm_times[j] < hi * scale


def test_table2_size_mix():
    only_small = generate(GenParams("table2", n=50, seed=1, size_mix=(1, 0, 0)))
    assert np.all(only_small.times[0] == 0.01) and np.all(only_small.times[1] == 0.04)
    assert np.all(only_small.comm_times < 0.15)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 30), st.integers(1, 5), st.integers(0, 2**64 - 1))
def test_monotone_columns(n, m, seed):
    inst = generate(GenParams("monotone_random", n=n, m=m, seed=seed))
    validate(inst)
    assert np.all(np.diff(inst.times, axis=0) > 0)
    assert np.all(np.diff(inst.accuracies) >= 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(1, 3), st.integers(0, 2**32))
def test_identical_columns(n, m, seed):
    inst = generate(GenParams("identical_random", n=n, m=m, seed=seed, grid=0.0625))
    assert np.all(inst.times == inst.times[:, :1])
    assert np.allclose(inst.times / 0.0625, np.round(inst.times / 0.0625))


@pytest.mark.parametrize("profile", ["table2", "monotone_random", "identical_random"])
def test_seed_determinism(profile):
    p = GenParams(profile, n=12, m=3, T=1.5, seed=42)
    assert dumps_instance(generate(p)) == dumps_instance(generate(p))
    assert dumps_instance(generate(p)) != dumps_instance(generate(GenParams(profile, n=12, m=3, T=1.5, seed=43)))


@pytest.mark.parametrize(
    "params",
    [
        GenParams("nope", n=3),
        GenParams("monotone_random", n=0),
        GenParams("monotone_random", n=3, T=0.0),
        GenParams("monotone_random", n=3, m=1, time_ranges=((0.1, 0.2),)),
        GenParams("monotone_random", n=3, m=1, time_ranges=((0.1, 0.3), (0.2, 0.4))),
        GenParams("monotone_random", n=3, accuracy_range=(0.5, 1.5)),
        GenParams("identical_random", n=3, grid=-1.0),
        GenParams("table2", n=3, size_mix=(1, 1)),
    ],
)
def test_invalid_params(params):
    with pytest.raises(InvalidParams):
        generate(params)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgesched.amdp import (
    AllToEs,
    CckpInstance,
    budget_units,
    build_cckp,
    build_dp_table,
    es_count,
    quantize,
    run_amdp,
    run_amdp_hetero,
    solve_cckp_dp,
    time_units,
)
from edgesched.errors import InfeasibleInstance, NotIdenticalJobs
from edgesched.model import Instance, fits
from edgesched.oracle import cckp_brute, exact_ilp
from edgesched.suite import identical_corpus

from conftest import brute_force

ACC = [0.4, 0.6, 0.8]


def identical(acc, ed, es, n, T, comm=None):
    times = [[t] * n for t in ed] + [[es] * n]
    return Instance(acc, times, T, comm)


def cckp(values, weights, capacity, cardinality, models, block):
    return CckpInstance(np.array(values, float), np.array(weights), capacity, cardinality, models, block)


def test_es_count_examples():
    assert es_count(1.0, 0.3, delta=0.1) == 3
    assert es_count(0.3, 0.3, delta=0.1) == 1
    assert es_count(0.2, 0.3, delta=0.1) == 0


def test_quantization_is_conservative():
    assert time_units(0.3, 0.1) == 3  # on the grid despite 0.3/0.1 = 2.9999999999999996
    assert time_units(0.31, 0.1) == 4
    assert time_units(1e-6, 0.1) == 1
    assert budget_units(0.39, 0.1) == 3
    assert budget_units(0.0, 0.1) == 0


@settings(max_examples=300, deadline=None)
@given(st.floats(0.01, 10), st.floats(0.01, 10), st.sampled_from([1e-3, 0.01, 0.1]))
def test_es_count_never_overassigns(T, p, delta):
    k = es_count(T, p, delta)
    assert k * p <= T + 1e-9
    assert time_units(p, delta) * delta >= p - 1e-12
    assert budget_units(T, delta) * delta <= T + 1e-12


def test_build_cckp_example():
    c = build_cckp(identical(ACC, [0.2, 0.5], 1.0, 4, 2.0), delta=0.1)
    assert c.n_es == 2 and c.cardinality == 2 and c.capacity == 20
    assert list(zip(c.values.tolist(), c.weights.tolist())) == [(0.4, 2), (0.4, 2), (0.6, 5), (0.6, 5)]
    assert [c.block_of(r) for r in range(4)] == [1, 1, 2, 2]


def test_build_cckp_all_to_es():
    c = build_cckp(identical(ACC, [0.2, 0.5], 1.0, 2, 2.5), delta=0.1)
    assert isinstance(c, AllToEs) and c.n_es == 2


def test_build_cckp_rejects_spread():
    inst = Instance(ACC, [[0.2, 0.7], [0.5, 0.5], [1.0, 1.0]], 2.0)
    with pytest.raises(NotIdenticalJobs):
        build_cckp(inst, delta=0.1)


def test_quantize_uses_max_time_within_tolerance():
    inst = Instance([0.5, 0.9], [[0.2, 0.2004], [0.5, 0.5]], 1.0)
    q = quantize(inst, 1e-3)
    assert q.ed_units == (201,) and q.es_units == 500 and q.budget_units == 1000


def test_dp_examples():
    four = build_cckp(identical(ACC, [0.2, 0.5], 1.0, 4, 2.0), delta=0.1)
    sel, value = solve_cckp_dp(four)
    assert value == pytest.approx(1.2) and sel == (2, 3)
    assert cckp_brute(four)[1] == pytest.approx(1.2)
    assert solve_cckp_dp(cckp([0.4, 0.6], [2, 5], 20, 0, 2, 1)) == ((), 0.0)
    with pytest.raises(InfeasibleInstance):
        solve_cckp_dp(cckp([0.5] * 4, [2] * 4, 5, 4, 1, 4))


@st.composite
def cckps(draw):
    m = draw(st.integers(1, 4))
    block = draw(st.integers(1, max(1, 20 // m)))
    vals = sorted(draw(st.lists(st.floats(0, 1), min_size=m, max_size=m)))
    ws = draw(st.lists(st.integers(1, 12), min_size=m, max_size=m))
    cap = draw(st.integers(0, 40))
    return cckp(np.repeat(vals, block), np.repeat(ws, block), cap, block, m, block)


@settings(max_examples=300, deadline=None)
@given(cckps())
def test_dp_matches_brute(c):
    try:
        expected = cckp_brute(c)[1]
    except InfeasibleInstance:
        with pytest.raises(InfeasibleInstance):
            solve_cckp_dp(c)
        return
    sel, value = solve_cckp_dp(c)
    assert value == pytest.approx(expected, abs=1e-9)
    assert len(sel) == c.cardinality == len(set(sel))
    assert sum(int(c.weights[r]) for r in sel) <= c.capacity
    assert sum(c.values[r] for r in sel) == pytest.approx(value)


@settings(max_examples=100, deadline=None)
@given(cckps())
def test_table_properties_and_block_agreement(c):
    t = build_dp_table(c)
    y = t.y
    assert np.all(y[:, :, 0] == 0.0)
    assert np.all(y[1:] >= y[:-1])
    assert np.all(y[:, 1:, :] >= y[:, :-1, :])
    full = y[-1, c.capacity, c.cardinality]
    try:
        _, value = solve_cckp_dp(c)
    except InfeasibleInstance:
        assert full == -np.inf
        return
    assert value == pytest.approx(full, abs=1e-12)


def test_item_exactly_filling_budget_is_taken():
    _, value = solve_cckp_dp(cckp([0.3, 0.9], [5, 10], 10, 1, 2, 1))
    assert value == pytest.approx(0.9)


def test_run_amdp_examples():
    rep = run_amdp(identical(ACC, [0.2, 0.5], 1.0, 4, 2.0), delta=0.1)
    assert rep.schedule.assignment == (2, 2, 3, 3)
    assert rep.metrics.total_accuracy == pytest.approx(2.8)
    assert rep.metrics.ed_load == pytest.approx(1.0)
    assert rep.metrics.es_load == pytest.approx(2.0)
    assert not rep.metrics.violates_T
    inst = identical(ACC, [0.2, 0.5], 1.0, 4, 2.0)
    assert brute_force(inst)[0] == pytest.approx(2.8)

    rep = run_amdp(identical(ACC, [0.2, 0.5], 1.0, 2, 2.5), delta=0.1)
    assert rep.schedule.assignment == (3, 3)
    assert rep.metrics.total_accuracy == pytest.approx(1.6)

    with pytest.raises(InfeasibleInstance):
        run_amdp(identical(ACC, [0.2, 0.5], 1.0, 4, 0.5), delta=0.1)


def test_run_amdp_matches_oracle_on_grid():
    for _, inst in identical_corpus(120, seed=17):
        try:
            best = exact_ilp(inst).metrics.total_accuracy
        except InfeasibleInstance:
            with pytest.raises(InfeasibleInstance):
                run_amdp(inst, delta=0.0625)
            continue
        rep = run_amdp(inst, delta=0.0625)
        assert rep.metrics.total_accuracy == pytest.approx(best, abs=1e-9)
        assert fits(rep.metrics.makespan, inst.deadline)


def test_run_amdp_off_grid_stays_feasible():
    rng = np.random.default_rng(5)
    for _ in range(60):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(1, 7))
        acc = np.sort(rng.uniform(0, 1, m + 1))
        ed = np.sort(rng.uniform(0.01, 0.5, m))
        es = float(rng.uniform(0.1, 1.0))
        T = float(rng.uniform(n * ed[0], 3.0))
        inst = identical(acc, ed, es, n, T)
        try:
            rep = run_amdp(inst, delta=0.01)
        except InfeasibleInstance:
            continue
        assert not rep.metrics.violates_T
        assert rep.metrics.total_accuracy <= brute_force(inst)[0] + 1e-9


def hetero_instance(comm, es_compute, ed, acc, T):
    n = len(comm)
    times = [[t] * n for t in ed] + [[c + es_compute for c in comm]]
    return Instance(acc, times, T, comm)


def test_hetero_example():
    inst = hetero_instance([0.3, 0.1, 0.2], 0.2, [0.2], [0.4, 0.8], 0.8)
    assert brute_force(inst)[0] == pytest.approx(2.0)
    rep = run_amdp_hetero(inst, delta=0.01)
    assert rep.schedule.assignment == (1, 2, 2)
    assert rep.metrics.total_accuracy == pytest.approx(2.0)
    assert not rep.metrics.violates_T


def test_hetero_empty_prefix():
    inst = hetero_instance([5.0, 6.0], 0.2, [0.2, 0.3], ACC, 1.0)
    rep = run_amdp_hetero(inst, delta=0.01)
    assert rep.extra["n_es"] == 0
    assert rep.schedule.assignment == (2, 2)


def test_hetero_single_job():
    inst = hetero_instance([0.05], 0.2, [0.2, 0.3], ACC, 1.0)
    rep = run_amdp_hetero(inst, delta=0.01)
    assert rep.schedule.assignment == (3,)
    assert rep.metrics.total_accuracy == pytest.approx(0.8)


def test_hetero_errors():
    with pytest.raises(NotIdenticalJobs):
        run_amdp_hetero(identical(ACC, [0.2, 0.5], 1.0, 2, 2.0), delta=0.01)
    inst = Instance([0.4, 0.8], [[0.2, 0.6], [0.3, 0.4]], 1.0, [0.1, 0.2])
    with pytest.raises(NotIdenticalJobs):
        run_amdp_hetero(inst, delta=0.01)
    inst = hetero_instance([5.0, 6.0], 0.2, [0.6], [0.4, 0.8], 1.0)
    with pytest.raises(InfeasibleInstance):
        run_amdp_hetero(inst, delta=0.01)


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.integers(1, 30), min_size=1, max_size=6),
    st.integers(1, 10),
    st.lists(st.integers(1, 20), min_size=1, max_size=3),
    st.integers(1, 80),
)
def test_hetero_is_optimal_on_grid(comm_u, es_u, ed_u, T_u):
    # everything in multiples of 1/64 so quantization is exact
    g = 1 / 64
    ed = sorted(u * g for u in ed_u)
    acc = [0.1 * (i + 1) for i in range(len(ed) + 1)]
    inst = hetero_instance([u * g for u in comm_u], es_u * g, ed, acc, T_u * g)
    best, _ = brute_force(inst)
    try:
        rep = run_amdp_hetero(inst, delta=g)
    except InfeasibleInstance:
        assert best is None
        return
    assert rep.metrics.total_accuracy == pytest.approx(best, abs=1e-9)
    assert not rep.metrics.violates_T

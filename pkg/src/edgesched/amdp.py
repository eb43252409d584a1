"""Exact solver for identical jobs via a cardinality-constrained knapsack DP.

With identical jobs the ES should take as many jobs as fit, ``floor(T/p_es)``.
The remaining ``n_l`` jobs go to the ED: pick exactly ``n_l`` items out of
``m`` blocks of ``n_l`` copies (one block per ED model) maximizing accuracy
subject to the ED budget. Times are mapped onto an integer grid of
resolution ``delta`` (times rounded up, budget rounded down), so a schedule
that is feasible in grid units is feasible in seconds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InfeasibleInstance, NotIdenticalJobs
from .model import Instance, Schedule, SolveReport, evaluate, validate

DEFAULT_DELTA = 1e-3
_SNAP = 1e-9


def _ratio(x: float, delta: float) -> float:
    r = x / delta
    nearest = round(r)
    # values already on the grid must not be pushed a unit up or down by float noise
    return float(nearest) if abs(r - nearest) <= _SNAP * max(1.0, abs(r)) else r


def time_units(x: float, delta: float) -> int:
    return max(1, math.ceil(_ratio(x, delta)))


def budget_units(T: float, delta: float) -> int:
    return max(0, math.floor(_ratio(T, delta)))


@dataclass(frozen=True)
class QuantizedTimes:
    delta: float
    ed_units: tuple
    es_units: int
    budget_units: int


@dataclass(frozen=True, eq=False)
class CckpInstance:
    """``n_models`` consecutive blocks of ``block`` identical items each."""

    values: np.ndarray
    weights: np.ndarray
    capacity: int
    cardinality: int
    n_models: int
    block: int
    n_es: int = 0
    quantized: Optional[QuantizedTimes] = None

    def block_of(self, item: int) -> int:
        """1-based model label of an item."""
        return item // self.block + 1


@dataclass(frozen=True)
class AllToEs:
    n_es: int
    quantized: QuantizedTimes


def es_count(T: float, p_es: float, delta: float = DEFAULT_DELTA) -> int:
    return budget_units(T, delta) // time_units(p_es, delta)


def _representative(row: np.ndarray, delta: float, what: str) -> float:
    spread = float(row.max() - row.min())
    if spread > delta / 2:
        raise NotIdenticalJobs(f"{what} varies by {spread:.6g}s across jobs (tolerance {delta / 2:.6g}s)")
    return float(row.max())


def quantize(instance: Instance, delta: float) -> QuantizedTimes:
    ed = tuple(
        time_units(_representative(instance.times[i], delta, f"model {i + 1} time"), delta)
        for i in range(instance.m)
    )
    es = time_units(_representative(instance.times[-1], delta, "ES time"), delta)
    return QuantizedTimes(delta, ed, es, budget_units(instance.deadline, delta))


def _expand(accuracies, ed_units, n_l: int, capacity: int, n_es: int, quantized) -> CckpInstance:
    m = len(ed_units)
    values = np.repeat(np.asarray(accuracies[:m], dtype=float), n_l)
    weights = np.repeat(np.asarray(ed_units, dtype=np.int64), n_l)
    return CckpInstance(values, weights, capacity, n_l, m, n_l, n_es, quantized)


def build_cckp(instance: Instance, delta: float = DEFAULT_DELTA):
    validate(instance)
    q = quantize(instance, delta)
    n_es = min(instance.n, q.budget_units // q.es_units)
    n_l = instance.n - n_es
    if n_l == 0:
        return AllToEs(n_es, q)
    return _expand(instance.accuracies, q.ed_units, n_l, q.budget_units, n_es, q)


@dataclass(frozen=True, eq=False)
class DpTable:
    """Full ``y[s][tau][k]`` table of the per-item recursion (small inputs only)."""

    y: np.ndarray
    take: np.ndarray


def build_dp_table(cckp: CckpInstance) -> DpTable:
    """Item-by-item recursion over ``y_s(tau, k)``; memory is O(items * capacity * cardinality).

    ``y[s, tau, k]`` is the best value using items ``0..s-1`` with total weight
    at most ``tau`` and exactly ``k`` items, ``-inf`` when unreachable.
    """
    S, B, K = len(cckp.values), cckp.capacity, cckp.cardinality
    y = np.full((S + 1, B + 1, K + 1), -np.inf)
    y[0, :, 0] = 0.0
    take = np.zeros((S + 1, B + 1, K + 1), dtype=bool)
    for s in range(1, S + 1):
        w, a = int(cckp.weights[s - 1]), float(cckp.values[s - 1])
        y[s] = y[s - 1]
        if w <= B and K > 0:
            cand = y[s - 1, : B + 1 - w, :K] + a
            better = cand > y[s, w:, 1:]
            y[s, w:, 1:] = np.where(better, cand, y[s, w:, 1:])
            take[s, w:, 1:] = better
    return DpTable(y, take)


def solve_cckp_dp(cckp: CckpInstance):
    """Best selection of exactly ``cardinality`` items within ``capacity``.

    Returns ``(selected item indices, value)``. Each block of identical copies
    is folded in one pass: taking ``c`` copies of weight ``w`` moves a state
    along the diagonal ``(tau + c*w, k + c)``, so the block update is a running
    maximum along those diagonals. This produces exactly the per-item table at
    block boundaries in O(capacity * cardinality) per block. Within a block
    the lowest-indexed copies are taken first, and on ties fewer copies of the
    later block are preferred.
    """
    B, K = cckp.capacity, cckp.cardinality
    if K == 0:
        return (), 0.0
    y = np.full((K + 1, B + 1), -np.inf)
    y[0, :] = 0.0
    copies = []
    for blk in range(cckp.n_models):
        first = blk * cckp.block
        # an item heavier than the capacity is never taken; cap it to bound memory
        w, a = min(int(cckp.weights[first]), B + 1), float(cckp.values[first])
        new = np.empty_like(y)
        src = np.empty((K + 1, B + 1), dtype=np.int32)
        # running best along each diagonal, indexed by u = tau - k*w (offset K*w)
        run = np.full(B + 1 + K * w, -np.inf)
        run_src = np.zeros(B + 1 + K * w, dtype=np.int32)
        for k in range(K + 1):
            off = (K - k) * w
            window = slice(off, off + B + 1)
            shifted = y[k] - k * a
            upd = shifted >= run[window]
            run[window] = np.where(upd, shifted, run[window])
            run_src[window] = np.where(upd, k, run_src[window])
            new[k] = run[window] + k * a
            src[k] = run_src[window]
        copies.append((np.arange(K + 1)[:, None] - src).astype(np.int32))
        y = new

    if not np.isfinite(y[K, B]):
        raise InfeasibleInstance("no exact-cardinality selection fits the capacity")
    value = float(y[K, B])

    selected = []
    k, tau = K, B
    for blk in range(cckp.n_models - 1, -1, -1):
        c = int(copies[blk][k, tau])
        w = min(int(cckp.weights[blk * cckp.block]), B + 1)
        selected.extend(range(blk * cckp.block, blk * cckp.block + c))
        k -= c
        tau -= c * w
    assert k == 0 and tau >= 0
    return tuple(sorted(selected)), value


def _schedule_from_counts(n: int, ed_counts, es_jobs) -> list:
    """Assign ED jobs in index order: the first ``counts[0]`` to model 1, and so on."""
    m = len(ed_counts)
    assignment = [m + 1] * n
    es_jobs = set(es_jobs)
    ed_jobs = [j for j in range(n) if j not in es_jobs]
    pos = 0
    for model, count in enumerate(ed_counts, start=1):
        for j in ed_jobs[pos : pos + count]:
            assignment[j] = model
        pos += count
    assert pos == len(ed_jobs)
    return assignment


def _counts(cckp: CckpInstance, selection) -> list:
    counts = [0] * cckp.n_models
    for r in selection:
        counts[cckp.block_of(r) - 1] += 1
    return counts


def _report(instance, assignment, algorithm, start, **extra) -> SolveReport:
    schedule = Schedule(assignment)
    return SolveReport(
        schedule=schedule,
        metrics=evaluate(instance, schedule),
        algorithm=algorithm,
        runtime_ms=1000.0 * (time.perf_counter() - start),
        extra=extra,
    )


def run_amdp(instance: Instance, delta: float = DEFAULT_DELTA) -> SolveReport:
    start = time.perf_counter()
    cckp = build_cckp(instance, delta)
    n = instance.n
    if isinstance(cckp, AllToEs):
        return _report(instance, [instance.m + 1] * n, "amdp", start, n_es=cckp.n_es)
    selection, _ = solve_cckp_dp(cckp)
    es_jobs = range(n - cckp.n_es, n)
    assignment = _schedule_from_counts(n, _counts(cckp, selection), es_jobs)
    return _report(instance, assignment, "amdp", start, n_es=cckp.n_es)


def run_amdp_hetero(instance: Instance, delta: float = DEFAULT_DELTA) -> SolveReport:
    """Identical ED and ES compute times, job-specific communication times.

    Jobs are offloaded in increasing communication time while the ES budget
    holds; the rest go through the knapsack DP.
    """
    start = time.perf_counter()
    validate(instance)
    if instance.comm_times is None:
        raise NotIdenticalJobs("heterogeneous-communication variant needs comm_times")
    m, n = instance.m, instance.n
    ed_units = tuple(
        time_units(_representative(instance.times[i], delta, f"model {i + 1} time"), delta) for i in range(m)
    )
    _representative(instance.times[-1] - instance.comm_times, delta, "ES compute time")
    budget = budget_units(instance.deadline, delta)

    order = sorted(range(n), key=lambda j: (instance.comm_times[j], j))
    es_jobs, used = [], 0
    for j in order:
        u = time_units(instance.times[m, j], delta)
        if used + u > budget:
            break
        es_jobs.append(j)
        used += u

    n_l = n - len(es_jobs)
    q = QuantizedTimes(delta, ed_units, 0, budget)
    counts = [0] * m
    if n_l:
        cckp = _expand(instance.accuracies, ed_units, n_l, budget, len(es_jobs), q)
        selection, _ = solve_cckp_dp(cckp)
        counts = _counts(cckp, selection)
    assignment = _schedule_from_counts(n, counts, es_jobs)
    return _report(instance, assignment, "amdp_hetero", start, n_es=len(es_jobs))

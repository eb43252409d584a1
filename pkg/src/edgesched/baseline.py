"""Greedy round-robin baseline (prefix offloading, then ED round robin)."""

from __future__ import annotations

import time

from .model import Instance, Schedule, SolveReport, evaluate, fits, validate


def greedy_rra(instance: Instance) -> SolveReport:
    """Three passes over the job list in index order.

    1. Offload jobs to the ES while the next one still fits in ``T``.
    2. Cycle the remaining jobs over ED models 1..m while the next one fits.
    3. Everything left goes to model 1, deadline or not.

    Each pass stops at its first misfit; no job is skipped.
    """
    start = time.perf_counter()
    validate(instance)
    m, n, T = instance.m, instance.n, instance.deadline
    p = instance.times
    assignment = [1] * n

    j, es_load = 0, 0.0
    while j < n and fits(es_load + p[m, j], T):
        es_load += p[m, j]
        assignment[j] = m + 1
        j += 1

    ed_load, turn = 0.0, 0
    while j < n:
        model = turn % m + 1
        if not fits(ed_load + p[model - 1, j], T):
            break
        ed_load += p[model - 1, j]
        assignment[j] = model
        turn += 1
        j += 1
    # remaining jobs keep the model-1 default

    schedule = Schedule(assignment)
    return SolveReport(
        schedule=schedule,
        metrics=evaluate(instance, schedule),
        algorithm="greedy",
        runtime_ms=1000.0 * (time.perf_counter() - start),
        extra={"offloaded": sum(1 for i in assignment if i == m + 1)},
    )

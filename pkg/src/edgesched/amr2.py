"""LP relaxation followed by rounding of the (at most two) split jobs.

The integer part of the relaxed vertex is kept as is. A single split job is
moved to the most accurate model (ED or ES) on which it alone fits in ``T``.
Two split jobs are re-solved exactly as a two-job ILP with a fresh budget
``T`` per machine, which is what yields the ``2T`` makespan guarantee.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleInstance, InternalError, SubIlpInfeasible
from .model import EPS, Instance, Schedule, SolveReport, evaluate, fits, validate
from .simplex import LpStatus, fractional_jobs, solve_relaxation


@dataclass(frozen=True)
class SubIlpAssignment:
    model_for_job1: int
    model_for_job2: int
    accuracy: float


def _best_model(instance: Instance, job: int, models) -> int | None:
    """Most accurate model among ``models`` on which ``job`` alone fits; lowest label on ties."""
    a, p, T = instance.accuracies, instance.times, instance.deadline
    best = None
    for i in models:
        if fits(p[i - 1, job], T) and (best is None or a[i - 1] > a[best - 1]):
            best = i
    return best


def solve_sub_ilp(instance: Instance, job1: int, job2: int) -> SubIlpAssignment:
    """Optimally place two jobs with a budget of ``T`` on each machine."""
    if job1 == job2:
        raise ValueError("sub-ILP needs two distinct jobs")
    a, p, T = instance.accuracies, instance.times, instance.deadline
    m = instance.m
    es = m + 1
    es1, es2 = p[m, job1], p[m, job2]
    ed_models = range(1, m + 1)

    if fits(es1, T) or fits(es2, T):
        if fits(es1 + es2, T):
            return SubIlpAssignment(es, es, 2 * a[m])
        best1 = _best_model(instance, job1, ed_models)
        best2 = _best_model(instance, job2, ed_models)
        # branch A keeps job1 on the ED, branch B keeps job2 on the ED
        branch_a = best1 is not None and fits(es2, T)
        branch_b = best2 is not None and fits(es1, T)
        if branch_a and branch_b:
            keep_job1 = a[best1 - 1] >= a[best2 - 1]
        elif branch_a or branch_b:
            keep_job1 = branch_a
        else:
            raise SubIlpInfeasible(f"jobs {job1} and {job2} cannot both be placed within T")
        if keep_job1:
            return SubIlpAssignment(best1, es, a[best1 - 1] + a[m])
        return SubIlpAssignment(es, best2, a[m] + a[best2 - 1])

    # both ES times exceed T: both jobs share the ED budget
    best = None
    for i1 in ed_models:
        for i2 in ed_models:
            if fits(p[i1 - 1, job1] + p[i2 - 1, job2], T):
                value = a[i1 - 1] + a[i2 - 1]
                if best is None or value > best[2]:
                    best = (i1, i2, value)
    if best is None:
        raise SubIlpInfeasible(f"no ED pair fits jobs {job1} and {job2} within T")
    return SubIlpAssignment(*best)


def run_amr2(instance: Instance) -> SolveReport:
    start = time.perf_counter()
    validate(instance)
    m1, n = instance.m + 1, instance.n

    solution = solve_relaxation(instance)
    if solution.status is LpStatus.INFEASIBLE:
        raise InfeasibleInstance("LP relaxation is infeasible")
    if solution.status is not LpStatus.OPTIMAL:
        raise InternalError(f"relaxation reported {solution.status.value}")

    x = solution.assignment_matrix(m1, n)
    split = sorted(fractional_jobs(solution, instance))
    if len(split) > 2:
        raise InternalError(f"basic solution has {len(split)} fractional jobs")

    # integer part: the model carrying (numerically) all of the job
    assignment = (np.argmax(x, axis=0) + 1).tolist()
    for j in range(n):
        if j not in split and x[assignment[j] - 1, j] < 1.0 - EPS:
            raise InternalError(f"job {j} is neither integral nor flagged fractional")

    if len(split) == 1:
        (j,) = split
        best = _best_model(instance, j, range(1, m1 + 1))
        if best is None:
            raise InfeasibleInstance(f"fractional job {j} fits on no model within T")
        assignment[j] = best
    elif len(split) == 2:
        sub = solve_sub_ilp(instance, split[0], split[1])
        assignment[split[0]] = sub.model_for_job1
        assignment[split[1]] = sub.model_for_job2

    schedule = Schedule(assignment)
    return SolveReport(
        schedule=schedule,
        metrics=evaluate(instance, schedule),
        algorithm="amr2",
        fractional_job_count=len(split),
        lp_objective=solution.objective,
        runtime_ms=1000.0 * (time.perf_counter() - start),
        extra={"fractional_jobs": tuple(split), "lp_values": x},
    )

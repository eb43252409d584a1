"""Seeded instance corpora and the property checks run by ``edgesched verify``.

Corpus deadlines are drawn relative to each instance: ``T`` is a random
multiple (1x to 2x) of the time needed to run every job on model 1, so every
corpus instance is feasible by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .amdp import run_amdp
from .amr2 import run_amr2, solve_sub_ilp
from .errors import InfeasibleInstance
from .gen import GenParams, SplitMix64, generate
from .model import EPS, Instance, Schedule, evaluate, fits
from .oracle import exact_ilp

ORACLE_LIMIT = 10**8


def _draw_int(rng: SplitMix64, lo: int, hi: int) -> int:
    """Uniform integer in [lo, hi]."""
    return lo + rng.next_u64() % (hi - lo + 1)


def monotone_corpus(count: int, seed: int = 0, n_range=(2, 30), m_range=(1, 5), all_fit: bool = False):
    """Feasible monotone_random instances with the deadline scaled to each instance.

    With ``all_fit`` the deadline is raised to at least the largest single job
    time, so every job fits alone on every model.
    """
    meta = SplitMix64(seed)
    for k in range(count):
        n = _draw_int(meta, *n_range)
        m = _draw_int(meta, *m_range)
        factor = meta.uniform(1.0, 2.0)
        inst = generate(GenParams("monotone_random", n=n, m=m, T=1.0, seed=meta.next_u64()))
        T = factor * float(inst.times[0].sum())
        if all_fit:
            T = max(T, float(inst.times.max()))
        yield k, replace(inst, deadline=T)


def identical_corpus(count: int, seed: int = 0, n_max: int = 8, m_max: int = 3, grid: float = 0.0625):
    """Identical-job instances whose times and deadline sit exactly on ``grid``."""
    meta = SplitMix64(seed)
    for k in range(count):
        n = _draw_int(meta, 1, n_max)
        m = _draw_int(meta, 1, m_max)
        ranges = tuple((0.0625 * 2**i, 0.0625 * 2 ** (i + 1)) for i in range(m + 1))
        inst = generate(
            GenParams("identical_random", n=n, m=m, T=1.0, seed=meta.next_u64(), time_ranges=ranges, grid=grid)
        )
        # anywhere from "only model 1 barely fits" up to generous
        units = _draw_int(meta, 1, 3 * n * round(inst.times[-1, 0] / grid))
        T = max(units * grid, n * float(inst.times[0, 0]))
        yield k, replace(inst, deadline=T)


def brute_sub_ilp(instance: Instance, job1: int, job2: int) -> float | None:
    """Best value over all (m+1)^2 placements of two jobs with a budget T per machine."""
    m, T = instance.m, instance.deadline
    a, p = instance.accuracies, instance.times
    best = None
    for i1, i2 in itertools.product(range(1, m + 2), repeat=2):
        ed = sum(p[i - 1, j] for i, j in ((i1, job1), (i2, job2)) if i <= m)
        es = sum(p[m, j] for i, j in ((i1, job1), (i2, job2)) if i == m + 1)
        if fits(ed, T) and fits(es, T):
            value = a[i1 - 1] + a[i2 - 1]
            best = value if best is None else max(best, value)
    return best


def random_pair(rng: SplitMix64) -> Instance:
    """A random 2-job instance spanning all three sub-ILP cases."""
    m = _draw_int(rng, 1, 5)
    acc = sorted(rng.random() for _ in range(m + 1))
    times = [[rng.uniform(0.05, 1.5) for _ in range(2)] for _ in range(m + 1)]
    return Instance(acc, times, rng.uniform(0.2, 1.5))


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    total: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def record(self, good: bool, detail=None):
        self.total += 1
        if good:
            self.passed += 1
        else:
            self.failures.append(detail)


def amr2_checks(count: int, seed: int = 0, oracle_n: int = 10, records=None):
    """Fractional-job count, 2T makespan and accuracy-gap checks over the monotone corpus."""
    lemma1 = CheckResult("lemma1")
    makespan = CheckResult("makespan_2T")
    gap_lp = CheckResult("gap_lp")
    gap_opt = CheckResult("gap_opt")
    relax = CheckResult("relaxation_bound")
    for k, inst in monotone_corpus(count, seed):
        rep = run_amr2(inst)
        if records is not None:
            records.append((k, inst, rep))
        a = inst.accuracies
        lemma1.record(rep.fractional_job_count <= 2, k)
        makespan.record(rep.metrics.makespan <= 2 * inst.deadline + EPS, k)
        bound = 2 * (a[-1] - a[0]) + EPS
        gap_lp.record(rep.lp_objective - rep.metrics.total_accuracy <= bound, k)
        if inst.n <= oracle_n:
            best = exact_ilp(inst, limit=ORACLE_LIMIT).metrics.total_accuracy
            gap_opt.record(best - rep.metrics.total_accuracy <= bound, k)
            relax.record(rep.lp_objective >= best - EPS, k)
    return [lemma1, makespan, gap_lp, gap_opt, relax]


def all_fit_check(count: int, seed: int = 1, n_max: int = 10):
    result = CheckResult("gap_all_fit")
    for k, inst in monotone_corpus(count, seed, n_range=(2, n_max), all_fit=True):
        rep = run_amr2(inst)
        best = exact_ilp(inst, limit=ORACLE_LIMIT).metrics.total_accuracy
        a = inst.accuracies
        result.record(best - rep.metrics.total_accuracy <= a[-1] - a[0] + EPS, k)
    return result


def sub_ilp_check(count: int, seed: int = 2):
    result = CheckResult("sub_ilp")
    rng = SplitMix64(seed)
    for k in range(count):
        inst = random_pair(rng)
        expected = brute_sub_ilp(inst, 0, 1)
        try:
            got = solve_sub_ilp(inst, 0, 1)
        except InfeasibleInstance:
            result.record(expected is None, k)
            continue
        sched = [got.model_for_job1, got.model_for_job2]
        m = evaluate(inst, Schedule(sched))
        ok = (
            expected is not None
            and abs(got.accuracy - expected) <= EPS
            and fits(m.ed_load, inst.deadline)
            and fits(m.es_load, inst.deadline)
        )
        result.record(ok, k)
    return result


def amdp_check(count: int, seed: int = 3):
    result = CheckResult("amdp_vs_oracle")
    for k, inst in identical_corpus(count, seed):
        try:
            best = exact_ilp(inst).metrics.total_accuracy
        except InfeasibleInstance:
            best = None
        try:
            rep = run_amdp(inst, delta=0.0625)
        except InfeasibleInstance:
            result.record(best is None, k)
            continue
        ok = (
            best is not None
            and abs(rep.metrics.total_accuracy - best) <= EPS
            and fits(rep.metrics.makespan, inst.deadline)
        )
        result.record(ok, k)
    return result

"""Exhaustive solvers used as ground truth by the tests and the verify command."""

from __future__ import annotations

import itertools
import time

import numpy as np

from .errors import InfeasibleInstance, TooLarge
from .model import Instance, Schedule, SolveReport, evaluate, fits, validate

DEFAULT_LIMIT = 10**7
_TIE = 1e-9


class _Search:
    """Depth-first branch and bound over job -> model assignments."""

    def __init__(self, instance: Instance, order):
        self.a = instance.accuracies.tolist()
        self.p = instance.times.tolist()
        self.T = instance.deadline
        self.m = instance.m
        self.n = instance.n
        self.order = list(order)
        self.a_max = max(self.a)
        self.assignment = [0] * self.n

    def bound(self, depth, acc, ed, es):
        """Optimistic value of the best completion, or None if some job cannot be placed.

        Each remaining job gets its best ED model that fits alone; on top of
        that, at most ``k`` jobs can still move to the ES, where ``k`` counts
        the smallest remaining ES times that fit together.
        """
        rest = self.n - depth
        coarse = acc + rest * self.a_max
        m, T = self.m, self.T
        es_left = []
        gains = []
        fine = acc
        for j in range(depth, self.n):
            best = None
            for i in range(1, m + 1):
                if fits(ed + self.p[i - 1][j], T) and (best is None or self.a[i - 1] > best):
                    best = self.a[i - 1]
            t_es = self.p[m][j]
            es_ok = fits(es + t_es, T)
            if best is None and not es_ok:
                return None
            if es_ok:
                es_left.append(t_es)
                gains.append(self.a[m] - best if best is not None else None)
            fine += best if best is not None else 0.0
        # jobs with no ED option must go to the ES
        forced = [g for g in gains if g is None]
        k, load = 0, es
        for t in sorted(es_left):
            if not fits(load + t, T):
                break
            load += t
            k += 1
        if len(forced) > k:
            return None
        fine += len(forced) * self.a[m]
        optional = sorted((g for g in gains if g is not None), reverse=True)
        fine += sum(g for g in optional[: k - len(forced)] if g > 0)
        return min(coarse, fine)

    def best_value(self):
        self.incumbent = None
        self._value(0, 0.0, 0.0, 0.0)
        return self.incumbent

    def _value(self, depth, acc, ed, es):
        if depth == self.n:
            if self.incumbent is None or acc > self.incumbent:
                self.incumbent = acc
            return
        bound = self.bound(depth, acc, ed, es)
        if bound is None or (self.incumbent is not None and bound <= self.incumbent + _TIE):
            return
        for i in self.order:
            t = self.p[i - 1][depth]
            if i == self.m + 1:
                if fits(es + t, self.T):
                    self._value(depth + 1, acc + self.a[i - 1], ed, es + t)
            elif fits(ed + t, self.T):
                self._value(depth + 1, acc + self.a[i - 1], ed + t, es)

    def first_reaching(self, target):
        """Lexicographically first feasible assignment whose value reaches ``target``."""
        return self._witness(0, 0.0, 0.0, 0.0, target)

    def _witness(self, depth, acc, ed, es, target):
        if depth == self.n:
            return acc >= target - _TIE
        bound = self.bound(depth, acc, ed, es)
        if bound is None or bound < target - _TIE:
            return False
        for i in self.order:
            t = self.p[i - 1][depth]
            if i == self.m + 1:
                ok = fits(es + t, self.T)
                nxt = (ed, es + t)
            else:
                ok = fits(ed + t, self.T)
                nxt = (ed + t, es)
            if ok:
                self.assignment[depth] = i
                if self._witness(depth + 1, acc + self.a[i - 1], *nxt, target):
                    return True
        return False


def _enumerate_all(instance: Instance):
    """Plain enumeration of every assignment, in lexicographic order."""
    best, best_value = None, None
    for assignment in itertools.product(range(1, instance.m + 2), repeat=instance.n):
        metrics = evaluate(instance, Schedule(assignment))
        if fits(metrics.ed_load, instance.deadline) and fits(metrics.es_load, instance.deadline):
            if best_value is None or metrics.total_accuracy > best_value + _TIE:
                best, best_value = assignment, metrics.total_accuracy
    return best


def exact_ilp(instance: Instance, limit: int = DEFAULT_LIMIT, prune: bool = True) -> SolveReport:
    """Optimal schedule by exhaustive search; ties go to the lexicographically smallest assignment.

    With ``prune`` the search is a branch and bound: a first pass visits models
    in descending accuracy to pin the optimal value, a second pass walks models
    in label order and stops at the first assignment reaching that value.
    """
    start = time.perf_counter()
    validate(instance)
    if (instance.m + 1) ** instance.n > limit:
        raise TooLarge(f"(m+1)^n = {instance.m + 1}^{instance.n} exceeds the state budget {limit}")

    if prune:
        by_accuracy = sorted(range(1, instance.m + 2), key=lambda i: (-instance.accuracies[i - 1], i))
        value = _Search(instance, by_accuracy).best_value()
        if value is None:
            raise InfeasibleInstance("no assignment meets the deadline")
        search = _Search(instance, range(1, instance.m + 2))
        if not search.first_reaching(value):
            raise AssertionError("witness pass failed to reach the optimal value")
        assignment = search.assignment
    else:
        assignment = _enumerate_all(instance)
        if assignment is None:
            raise InfeasibleInstance("no assignment meets the deadline")

    schedule = Schedule(assignment)
    return SolveReport(
        schedule=schedule,
        metrics=evaluate(instance, schedule),
        algorithm="exact",
        runtime_ms=1000.0 * (time.perf_counter() - start),
    )


def cckp_brute(cckp, limit_items: int = 24):
    """Best exact-cardinality item subset within capacity, by enumerating all subsets.

    Returns ``(selected item indices, value)``; ties keep the first subset in
    lexicographic order.
    """
    values, weights = np.asarray(cckp.values), np.asarray(cckp.weights)
    count = len(values)
    if count > limit_items:
        raise TooLarge(f"{count} items exceeds the brute-force limit {limit_items}")
    k = cckp.cardinality
    if k > count:
        raise InfeasibleInstance("cardinality exceeds item count")
    best, best_value = None, None
    for subset in itertools.combinations(range(count), k):
        if sum(int(weights[r]) for r in subset) <= cckp.capacity:
            value = float(sum(values[r] for r in subset))
            if best_value is None or value > best_value + _TIE:
                best, best_value = subset, value
    if best is None:
        raise InfeasibleInstance("no exact-cardinality subset fits the capacity")
    return tuple(best), best_value

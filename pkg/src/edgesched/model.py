"""Problem data model: instances, schedules and their evaluation.

Models are numbered 1..m+1 as labels; model ``m+1`` is the edge server (ES),
models 1..m live on the edge device (ED). Jobs are addressed by 0-based
position, so ``schedule.assignment[j]`` is the model label of job ``j``.
Row ``i-1`` of ``Instance.times`` holds the times on model ``i``; the last
row is the ES total time (communication plus server compute).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CommExceedsTotal,
    DimensionMismatch,
    IndexOutOfRange,
    InvalidInstance,
    NonMonotoneAccuracy,
    NonPositiveDeadline,
    NonPositiveTime,
)

# Feasibility / integrality tolerance used across the package.
EPS = 1e-9


def _frozen_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise DimensionMismatch(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    accuracies: np.ndarray
    times: np.ndarray
    deadline: float
    comm_times: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "accuracies", _frozen_array(self.accuracies, 1))
        object.__setattr__(self, "times", _frozen_array(self.times, 2))
        object.__setattr__(self, "deadline", float(self.deadline))
        if self.comm_times is not None:
            object.__setattr__(self, "comm_times", _frozen_array(self.comm_times, 1))

    @property
    def m(self) -> int:
        """Number of ED models."""
        return len(self.accuracies) - 1

    @property
    def n(self) -> int:
        return self.times.shape[1]

    @property
    def es_times(self) -> np.ndarray:
        return self.times[-1]

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        if (self.comm_times is None) != (other.comm_times is None):
            return False
        return (
            self.deadline == other.deadline
            and np.array_equal(self.accuracies, other.accuracies)
            and self.times.shape == other.times.shape
            and np.array_equal(self.times, other.times)
            and (self.comm_times is None or np.array_equal(self.comm_times, other.comm_times))
        )

    __hash__ = None

    def permuted(self, order: Sequence[int]) -> "Instance":
        """Same instance with jobs reordered so new job ``k`` is old job ``order[k]``."""
        order = list(order)
        comm = None if self.comm_times is None else self.comm_times[order]
        return Instance(self.accuracies, self.times[:, order], self.deadline, comm)


@dataclass(frozen=True)
class Schedule:
    assignment: tuple

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(i) for i in self.assignment))

    def __len__(self):
        return len(self.assignment)

    def one_hot(self, m: int) -> np.ndarray:
        """The (m+1) x n 0/1 matrix with exactly one 1 per column."""
        x = np.zeros((m + 1, len(self.assignment)))
        for j, i in enumerate(self.assignment):
            x[i - 1, j] = 1.0
        return x


@dataclass(frozen=True)
class Metrics:
    total_accuracy: float
    ed_load: float
    es_load: float
    makespan: float
    violates_T: bool
    violation_pct: float


@dataclass(frozen=True)
class SolveReport:
    schedule: Schedule
    metrics: Metrics
    algorithm: str
    fractional_job_count: int = 0
    lp_objective: Optional[float] = None
    runtime_ms: float = 0.0
    extra: dict = field(default_factory=dict, compare=False)


def fits(load: float, deadline: float) -> bool:
    return load <= deadline + EPS


def validate(instance: Instance) -> Instance:
    """Return ``instance`` unchanged if it satisfies every invariant, else raise."""
    a, p = instance.accuracies, instance.times
    if len(a) < 2:
        raise DimensionMismatch("need at least one ED model plus the ES model")
    if p.shape[0] != len(a):
        raise DimensionMismatch(f"times has {p.shape[0]} rows, expected m+1={len(a)}")
    if p.shape[1] < 1:
        raise DimensionMismatch("need at least one job")
    if instance.comm_times is not None and instance.comm_times.shape != (p.shape[1],):
        raise DimensionMismatch("comm_times must have one entry per job")
    if not np.all(np.isfinite(a)) or np.any(a < 0) or np.any(a > 1):
        raise InvalidInstance("accuracies must lie in [0, 1]")
    if np.any(np.diff(a) < 0):
        raise NonMonotoneAccuracy(f"accuracies must be nondecreasing, got {a.tolist()}")
    if not np.all(np.isfinite(p)) or np.any(p <= 0):
        raise NonPositiveTime("all processing times must be positive and finite")
    if not np.isfinite(instance.deadline) or instance.deadline <= 0:
        raise NonPositiveDeadline(f"deadline must be positive, got {instance.deadline}")
    if instance.comm_times is not None:
        c = instance.comm_times
        if np.any(c < 0) or np.any(c >= p[-1]):
            raise CommExceedsTotal("each comm time must be nonnegative and below the ES total time")
    return instance


def evaluate(instance: Instance, schedule: Schedule) -> Metrics:
    m, n = instance.m, instance.n
    assignment = schedule.assignment
    if len(assignment) != n:
        raise IndexOutOfRange(f"schedule has {len(assignment)} entries for {n} jobs")
    acc, ed, es = [], [], []
    for j, i in enumerate(assignment):
        if not 1 <= i <= m + 1:
            raise IndexOutOfRange(f"job {j} assigned to model {i}, valid range is 1..{m + 1}")
        acc.append(instance.accuracies[i - 1])
        (es if i == m + 1 else ed).append(instance.times[i - 1, j])
    # fsum is correctly rounded, so metrics do not depend on job order
    ed_load, es_load = math.fsum(ed), math.fsum(es)
    makespan = max(ed_load, es_load)
    T = instance.deadline
    return Metrics(
        total_accuracy=math.fsum(acc),
        ed_load=float(ed_load),
        es_load=float(es_load),
        makespan=float(makespan),
        violates_T=not fits(makespan, T),
        violation_pct=100.0 * max(0.0, makespan - T) / T,
    )

"""Shared helpers for the experiment scripts."""

from __future__ import annotations

import statistics
from collections import defaultdict

from edgesched.cli import CsvSink, RunRecord, solve
from edgesched.errors import InfeasibleInstance


def run_grid(points, algos, delta=None):
    """Solve every (key, seed, instance) point with every algorithm; infeasible solves are dropped."""
    records, skipped = [], 0
    for key, seed, inst in points:
        for algo in algos:
            try:
                rep = solve(inst, algo, delta)
            except InfeasibleInstance:
                skipped += 1
                continue
            records.append((key, RunRecord.from_report(inst, rep, seed=seed)))
    return records, skipped


def summarize(records, key_name, fields=("total_accuracy", "violation_pct", "runtime_ms")):
    groups = defaultdict(list)
    for key, rec in records:
        groups[(key, rec.algorithm)].append(rec)
    header = f"{key_name:>6} {'algo':>8} " + " ".join(f"{f:>15}" for f in fields)
    print(header)
    for (key, algo), recs in sorted(groups.items()):
        cols = " ".join(f"{statistics.fmean(getattr(r, f) for r in recs):15.4f}" for f in fields)
        print(f"{key:>6g} {algo:>8} {cols}")


def write(records, path):
    CsvSink(path).write(rec for _, rec in records)
